#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "interval.hpp"
#include "mlp.hpp"
#include "unary.hpp"

namespace suprelax {

//! @brief Shekel foxholes with m = 10 holes in an even dimension n
struct ShekelParams
{
  std::size_t m = 10;
  std::size_t n = 2;
  //! alpha[i][k]: coordinate i of hole k
  std::vector<std::vector<double>> alpha;
  std::vector<double> beta;

  static ShekelParams standard( std::size_t n )
  {
    if( n < 2 || n % 2 ) throw ArgumentError( "Shekel dimension must be even and positive" );
    static const double even[10] = { 4, 1, 8, 6, 3, 2, 5, 8, 6, 7 };
    static const double odd[10] = { 4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6 };
    ShekelParams p;
    p.n = n;
    p.beta = { 0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5 };
    // 1-based coordinate 2j-1 takes the odd row, 2j the even row
    for( std::size_t i = 0; i < n; ++i ){
      const double* row = i % 2 == 0 ? odd : even;
      p.alpha.emplace_back( row, row + 10 );
    }
    return p;
  }

  double operator()( std::span<const double> x ) const
  {
    double f = 0.;
    for( std::size_t k = 0; k < m; ++k ){
      double q = beta[k];
      for( std::size_t i = 0; i < n; ++i ) q += ( x[i] - alpha[i][k] ) * ( x[i] - alpha[i][k] );
      f += 1. / q;
    }
    return f;
  }
};

namespace detail {

inline double cs1_value( std::span<const double> x )
{
  const double a = x[0], b = x[1];
  return a * b * ( a * ( std::exp( a ) - std::exp( -a ) ) + b * ( std::exp( b ) - std::exp( -b ) ) );
}

inline double cs3_value( std::span<const double> x )
{
  const double a = x[0], b = x[1];
  return 3. * ( 1. - a ) * ( 1. - a ) * std::exp( -a * a - ( b + 1. ) * ( b + 1. ) )
       - 10. * ( a / 5. - a * a * a - std::pow( b, 5 ) ) * std::exp( -a * a - b * b )
       - std::exp( -( a + 1. ) * ( a + 1. ) - b * b ) / 3.;
}

//! @brief Coordinatewise golden-section refinement of a local extremum inside X
//!
//! sense = +1 maximizes, -1 minimizes. Starts from x with an initial bracket
//! half-width h per coordinate and never leaves X.
template <typename F>
double polish( const F& f, const Box& X, std::vector<double>& x, std::vector<double> h, double sense, int sweeps = 6 )
{
  const double g = 0.5 * ( std::sqrt( 5. ) - 1. );
  double best = sense * f( std::span<const double>( x ) );
  for( int s = 0; s < sweeps; ++s ){
    for( std::size_t i = 0; i < x.size(); ++i ){
      double a = std::max( X[i].lo(), x[i] - h[i] ), b = std::min( X[i].hi(), x[i] + h[i] );
      auto val = [&]( double t ){ const double keep = x[i]; x[i] = t; const double v = sense * f( std::span<const double>( x ) ); x[i] = keep; return v; };
      double c = b - g * ( b - a ), d = a + g * ( b - a ), fc = val( c ), fd = val( d );
      for( int it = 0; it < 60 && b - a > 1e-15 * ( 1. + std::fabs( a ) ); ++it ){
        if( fc > fd ){ b = d; d = c; fd = fc; c = b - g * ( b - a ); fc = val( c ); }
        else{ a = c; c = d; fc = fd; d = a + g * ( b - a ); fd = val( d ); }
      }
      const double t = fc > fd ? c : d, ft = std::max( fc, fd );
      if( ft > best ){ best = ft; x[i] = t; }
      h[i] *= 0.5;
    }
  }
  return sense * best;
}

} // namespace detail

//! @brief A benchmark function: expression graph, independent real oracle, box and contraction centre
struct Case
{
  std::string id;
  Box box;
  std::vector<double> center;
  std::shared_ptr<Graph> graph;
  Expr expr;
  //! Closed-form evaluation that does not go through the expression graph
  std::function<double( std::span<const double> )> value;
  //! How oracle_range estimates the true range; documented per case
  std::string oracle_method;

  std::size_t dim() const { return box.size(); }

  //! @brief Estimated true range of the function on X
  //!
  //! n <= 3: full grid with `grid` points per dimension, then local polish of
  //! the best points. n > 3: corners, `samples` seeded uniform points and a
  //! polish started from the centre and the best samples. Estimates are inner
  //! approximations, so widths are never overstated.
  Interval oracle_range( const Box& X, std::size_t grid = 1001, std::size_t samples = 100000, std::uint64_t seed = 7 ) const
  {
    const std::size_t n = X.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::vector<double> xlo( n ), xhi( n ), x( n );
    auto visit = [&]( const std::vector<double>& p ){
      const double v = value( std::span<const double>( p ) );
      if( v < lo ) lo = v, xlo = p;
      if( v > hi ) hi = v, xhi = p;
    };
    std::vector<double> h( n );
    if( n <= 3 ){
      if( grid < 2 ) throw ArgumentError( "oracle grid needs at least 2 points per dimension" );
      std::vector<std::size_t> k( n, 0 );
      for( std::size_t i = 0; i < n; ++i ) h[i] = X[i].width() / double( grid - 1 );
      for( ;; ){
        for( std::size_t i = 0; i < n; ++i ) x[i] = k[i] + 1 == grid ? X[i].hi() : X[i].lo() + X[i].width() * double( k[i] ) / double( grid - 1 );
        visit( x );
        std::size_t i = 0;
        while( i < n && ++k[i] == grid ) k[i++] = 0;
        if( i == n ) break;
      }
    }
    else{
      for( std::size_t c = 0; c < ( std::size_t( 1 ) << n ); ++c ){
        for( std::size_t i = 0; i < n; ++i ) x[i] = ( c >> i ) & 1 ? X[i].hi() : X[i].lo();
        visit( x );
      }
      std::vector<double> mid = X.midpoint();
      std::vector<double> ctr( n );
      for( std::size_t i = 0; i < n; ++i ) ctr[i] = std::clamp( center[i], X[i].lo(), X[i].hi() );
      visit( ctr );
      visit( mid );
      std::mt19937_64 rng( seed );
      for( std::size_t s = 0; s < samples; ++s ){
        for( std::size_t i = 0; i < n; ++i ) x[i] = std::uniform_real_distribution<double>( X[i].lo(), X[i].hi() )( rng );
        visit( x );
      }
      for( std::size_t i = 0; i < n; ++i ) h[i] = 0.25 * X[i].width();
      std::vector<double> p = ctr;
      visit( ( detail::polish( value, X, p, h, +1. ), p ) );
      p = ctr;
      visit( ( detail::polish( value, X, p, h, -1. ), p ) );
    }
    std::vector<double> p = xlo;
    visit( ( detail::polish( value, X, p, h, -1. ), p ) );
    p = xhi;
    visit( ( detail::polish( value, X, p, h, +1. ), p ) );
    return { lo, hi };
  }
};

namespace detail {

inline std::vector<double> parse_list( const std::string& s, const std::string& what )
{
  std::vector<double> v;
  std::stringstream ss( s );
  std::string tok;
  while( std::getline( ss, tok, ',' ) ){
    try{
      std::size_t pos = 0;
      v.push_back( std::stod( tok, &pos ) );
      if( pos != tok.size() ) throw std::invalid_argument( tok );
    }
    catch( const std::exception& ){
      throw ArgumentError( "cannot parse " + what + " '" + s + "'" );
    }
  }
  return v;
}

inline Case cs1_case()
{
  Case c;
  c.id = "cs1";
  c.box = Box{ Interval( -1., 2. ), Interval( -2., 1. ) };
  c.center = { -0.5, 0.5 };
  c.graph = make_graph( 2 );
  const Expr x = build_var( c.graph, 0 ), y = build_var( c.graph, 1 );
  c.expr = x * y * ( x * ( exp( x ) - exp( -x ) ) + y * ( exp( y ) - exp( -y ) ) );
  c.value = cs1_value;
  c.oracle_method = "grid";
  return c;
}

inline Case cs2_case( std::size_t n )
{
  const ShekelParams p = ShekelParams::standard( n );
  Case c;
  c.id = "cs2:" + std::to_string( n );
  c.box = Box::cube( Interval( 0., 10. ), n );
  c.center.assign( n, 4. );
  c.graph = make_graph( n );
  std::vector<Expr> x;
  for( std::size_t i = 0; i < n; ++i ) x.push_back( build_var( c.graph, i ) );
  Expr f;
  for( std::size_t k = 0; k < p.m; ++k ){
    Expr q = sqr( x[0] - p.alpha[0][k] );
    for( std::size_t i = 1; i < n; ++i ) q = q + sqr( x[i] - p.alpha[i][k] );
    const Expr t = inv( q + p.beta[k] );
    f = f.valid() ? f + t : t;
  }
  c.expr = f;
  c.value = p;
  c.oracle_method = n <= 3 ? "grid" : "corners+montecarlo+polish";
  return c;
}

inline Case cs3_case()
{
  Case c;
  c.id = "cs3";
  c.box = Box::cube( Interval( -3., 3. ), 2 );
  c.center = { -0.0106, 1.5803 };
  c.graph = make_graph( 2 );
  const Expr x = build_var( c.graph, 0 ), y = build_var( c.graph, 1 );
  c.expr = 3. * sqr( 1. - x ) * exp( -sqr( x ) - sqr( y + 1. ) )
         - 10. * ( x / 5. - pow( x, 3 ) - pow( y, 5 ) ) * exp( -sqr( x ) - sqr( y ) )
         - ( 1. / 3. ) * exp( -sqr( x + 1. ) - sqr( y ) );
  c.value = cs3_value;
  c.oracle_method = "grid";
  return c;
}

} // namespace detail

//! @brief Seed and shape of the shipped random ReLU network
inline MlpModel builtin_random_mlp()
{
  return random_mlp( { 2, 10, 10, 1 }, Box::cube( Interval( -3., 3. ), 2 ), 20240601 );
}

//! @brief Case wrapping a network; the centre is its maximizer on a 201-point grid
inline Case mlp_case( const MlpModel& model, const std::string& id )
{
  model.validate();
  if( model.output_dim() != 1 ) throw ModelError( "benchmark networks need a single output" );
  Case c;
  c.id = id;
  c.box = model.input_box;
  c.graph = make_graph( model.input_dim );
  c.expr = mlp_to_dag( model, c.graph ).front();
  c.value = [model]( std::span<const double> x ){ return mlp_forward( model, x ).front(); };
  c.oracle_method = model.input_dim <= 3 ? "grid" : "corners+montecarlo+polish";
  // centre: best point of a coarse grid (n <= 3) or the box midpoint
  c.center = c.box.midpoint();
  if( model.input_dim <= 3 ){
    const std::size_t n = model.input_dim, m = 201;
    std::vector<std::size_t> k( n, 0 );
    std::vector<double> x( n );
    double best = -std::numeric_limits<double>::infinity();
    for( ;; ){
      for( std::size_t i = 0; i < n; ++i ) x[i] = c.box[i].lo() + c.box[i].width() * double( k[i] ) / double( m - 1 );
      const double v = c.value( x );
      if( v > best ) best = v, c.center = x;
      std::size_t i = 0;
      while( i < n && ++k[i] == m ) k[i++] = 0;
      if( i == n ) break;
    }
  }
  return c;
}

//! @brief Ridge phi(x1 + x2) on [lo,hi]^2; default box [-1,2]^2, centre the box midpoint
inline Case ridge_case( const UnaryFunc& phi, const Interval& dom )
{
  Case c;
  c.id = "ridge:" + phi.name();
  c.box = Box::cube( dom, 2 );
  c.center = c.box.midpoint();
  c.graph = make_graph( 2 );
  c.expr = build_unary( build_var( c.graph, 0 ) + build_var( c.graph, 1 ), phi );
  c.value = [phi]( std::span<const double> x ){ return phi.eval( x[0] + x[1] ); };
  c.oracle_method = "grid";
  return c;
}

//! @brief Look up a case by its identifier
//!
//! cs1, cs2:<n> (n even), cs3, mlp:random, mlp:<path to JSON>,
//! ridge:<func>[:lo,hi]. Throws ArgumentError or ModelError on bad input.
inline Case make_case( const std::string& spec )
{
  if( spec == "cs1" ) return detail::cs1_case();
  if( spec == "cs3" ) return detail::cs3_case();
  if( spec.rfind( "cs2:", 0 ) == 0 ){
    const std::string t = spec.substr( 4 );
    std::size_t n = 0;
    try{
      std::size_t pos = 0;
      n = std::stoul( t, &pos );
      if( pos != t.size() ) throw std::invalid_argument( t );
    }
    catch( const std::exception& ){
      throw ArgumentError( "cannot parse Shekel dimension in '" + spec + "'" );
    }
    return detail::cs2_case( n );
  }
  if( spec == "mlp" || spec == "mlp:random" ) return mlp_case( builtin_random_mlp(), "mlp:random" );
  if( spec.rfind( "mlp:", 0 ) == 0 ) return mlp_case( load_mlp( spec.substr( 4 ) ), spec );
  if( spec.rfind( "ridge:", 0 ) == 0 ){
    std::string f = spec.substr( 6 );
    Interval dom( -1., 2. );
    const auto colon = f.rfind( ':' );
    if( colon != std::string::npos && f.find( ',', colon ) != std::string::npos ){
      const auto v = detail::parse_list( f.substr( colon + 1 ), "ridge box" );
      if( v.size() != 2 || !( v[0] <= v[1] ) ) throw ArgumentError( "ridge box must be lo,hi with lo <= hi" );
      dom = Interval( v[0], v[1] );
      f = f.substr( 0, colon );
    }
    Case c = ridge_case( parse_unary( f ), dom );
    c.id = spec;
    return c;
  }
  throw ArgumentError( "unknown case '" + spec + "'" );
}

} // namespace suprelax
