#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cases.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "interval.hpp"
#include "mccormick.hpp"
#include "suprelax.hpp"

namespace suprelax {

//! @brief Which arithmetic bounds the case: pwl:<n_ini>, pwc:<n_grid>, mccormick, interval
struct ArithSpec
{
  enum class Kind { pwl, pwc, mccormick, interval };
  Kind kind = Kind::pwl;
  std::size_t n = 1;

  std::string text() const
  {
    switch( kind ){
      case Kind::pwl: return "pwl:" + std::to_string( n );
      case Kind::pwc: return "pwc:" + std::to_string( n );
      case Kind::mccormick: return "mccormick";
      case Kind::interval: return "interval";
    }
    return "?";
  }
};

inline ArithSpec parse_arith( const std::string& s )
{
  ArithSpec a;
  if( s == "mccormick" ){ a.kind = ArithSpec::Kind::mccormick; return a; }
  if( s == "interval" ){ a.kind = ArithSpec::Kind::interval; return a; }
  const bool pwl = s.rfind( "pwl:", 0 ) == 0, pwc = s.rfind( "pwc:", 0 ) == 0;
  if( !pwl && !pwc ) throw ArgumentError( "unknown arithmetic '" + s + "'" );
  a.kind = pwl ? ArithSpec::Kind::pwl : ArithSpec::Kind::pwc;
  const std::string t = s.substr( 4 );
  try{
    std::size_t pos = 0;
    const long v = std::stol( t, &pos );
    if( pos != t.size() || v < 1 ) throw std::invalid_argument( t );
    a.n = std::size_t( v );
  }
  catch( const std::exception& ){
    throw ArgumentError( "arithmetic '" + s + "' needs a positive segment count" );
  }
  return a;
}

//! @brief Under/over estimator values at one point
struct Bracket
{
  double under, over;
};

//! @brief Relaxation of one case on one box in one arithmetic
//!
//! Superposition and interval relaxations are built once; McCormick
//! estimators are recomputed at every query point.
class Estimator
{
public:
  Estimator( const Case& c, const ArithSpec& a, const Box& X ): _case( &c ), _arith( a ), _box( X )
  {
    switch( a.kind ){
      case ArithSpec::Kind::pwl: _pwl = dag_eval( c.expr, SupArith<PwlFunction>{ X, a.n } ); break;
      case ArithSpec::Kind::pwc: _pwc = dag_eval( c.expr, SupArith<PwcPair>{ X, a.n } ); break;
      case ArithSpec::Kind::interval: _iv = dag_eval( c.expr, IntervalArith{ X } ); break;
      case ArithSpec::Kind::mccormick: _iv = dag_eval( c.expr, McArith{ X, X.midpoint() } ).range; break;
    }
  }

  const Box& box() const { return _box; }
  const ArithSpec& arith() const { return _arith; }
  const std::optional<PwlRelax>& pwl() const { return _pwl; }
  const std::optional<PwcRelax>& pwc() const { return _pwc; }

  //! @brief Inclusion of the range; for McCormick the interval part of the value
  Interval range() const
  {
    if( _pwl ) return _pwl->range();
    if( _pwc ) return _pwc->range();
    return *_iv;
  }

  Bracket at( std::span<const double> x ) const
  {
    if( _pwl ) return { _pwl->eval_under( x ), _pwl->eval_over( x ) };
    if( _pwc ) return { _pwc->eval_under( x ), _pwc->eval_over( x ) };
    if( _arith.kind == ArithSpec::Kind::interval ) return { _iv->lo(), _iv->hi() };
    const McValue v = dag_eval( _case->expr, McArith{ _box, std::vector<double>( x.begin(), x.end() ) } );
    return { v.cv, v.cc };
  }

private:
  const Case* _case;
  ArithSpec _arith;
  Box _box;
  std::optional<PwlRelax> _pwl;
  std::optional<PwcRelax> _pwc;
  std::optional<Interval> _iv;
};

//! @brief Sample points covering X
//!
//! Full grid with m points per dimension for n <= 3, otherwise `mc` seeded
//! uniform points.
inline std::vector<std::vector<double>> sample_points( const Box& X, std::size_t m, std::size_t mc, std::uint64_t seed )
{
  const std::size_t n = X.size();
  std::vector<std::vector<double>> pts;
  if( n <= 3 ){
    if( m < 2 ) throw ArgumentError( "sample grid needs at least 2 points per dimension" );
    std::vector<std::size_t> k( n, 0 );
    std::vector<double> x( n );
    for( ;; ){
      for( std::size_t i = 0; i < n; ++i ) x[i] = k[i] + 1 == m ? X[i].hi() : X[i].lo() + X[i].width() * double( k[i] ) / double( m - 1 );
      pts.push_back( x );
      std::size_t i = 0;
      while( i < n && ++k[i] == m ) k[i++] = 0;
      if( i == n ) break;
    }
    return pts;
  }
  std::mt19937_64 rng( seed );
  pts.reserve( mc );
  for( std::size_t s = 0; s < mc; ++s ){
    std::vector<double> x( n );
    for( std::size_t i = 0; i < n; ++i ) x[i] = std::uniform_real_distribution<double>( X[i].lo(), X[i].hi() )( rng );
    pts.push_back( std::move( x ) );
  }
  return pts;
}

//! @brief Seeded uniform points in X, used by soundness checks at any dimension
inline std::vector<std::vector<double>> uniform_points( const Box& X, std::size_t count, std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::vector<std::vector<double>> pts( count, std::vector<double>( X.size() ) );
  for( auto& x : pts )
    for( std::size_t i = 0; i < X.size(); ++i ) x[i] = std::uniform_real_distribution<double>( X[i].lo(), X[i].hi() )( rng );
  return pts;
}

struct PointwiseError
{
  double under = 0., over = 0.;
  //! @brief Larger of the two gaps
  double max() const { return std::max( under, over ); }
};

//! @brief sup |f - f^u| and sup |f - f^o| over the sample points
template <typename F, typename E>
PointwiseError pointwise_error( const F& f, const E& est, const std::vector<std::vector<double>>& pts )
{
  PointwiseError e;
  for( auto const& x : pts ){
    const double v = f( std::span<const double>( x ) );
    const Bracket b = est( std::span<const double>( x ) );
    e.under = std::max( e.under, std::fabs( v - b.under ) );
    e.over = std::max( e.over, std::fabs( b.over - v ) );
  }
  return e;
}

struct Validity
{
  double max_violation = 0.;
  //! max of violation / (1 + |f|)
  double max_scaled = 0.;
  bool pass() const { return max_scaled <= 1e-8; }
};

//! @brief Max over samples of max(f^u - f, f - f^o, 0)
template <typename F, typename E>
Validity validity_check( const F& f, const E& est, const std::vector<std::vector<double>>& pts )
{
  Validity r;
  for( auto const& x : pts ){
    const double v = f( std::span<const double>( x ) );
    const Bracket b = est( std::span<const double>( x ) );
    const double viol = std::max( { b.under - v, v - b.over, 0. } );
    r.max_violation = std::max( r.max_violation, viol );
    r.max_scaled = std::max( r.max_scaled, viol / ( 1. + std::fabs( v ) ) );
  }
  return r;
}

//! @brief Soundness of a case relaxation on its full box over `count` seeded uniform samples
inline Validity validity_check( const Case& c, const ArithSpec& a, std::size_t count, std::uint64_t seed )
{
  const Estimator est( c, a, c.box );
  return validity_check( c.value, [&]( std::span<const double> x ){ return est.at( x ); }, uniform_points( c.box, count, seed ) );
}

//! @brief Sweep configuration; rho values strictly in (0,1] and decreasing
struct SweepConfig
{
  std::string case_id;
  ArithSpec arith;
  std::optional<std::vector<double>> center;
  std::vector<double> rho;
  std::size_t grid = 33;
  std::size_t mc_samples = 100000;
  std::size_t oracle_grid = 1001;
  std::size_t oracle_samples = 100000;
  std::uint64_t seed = 1;
  bool timing = true;

  //! @brief count log-spaced values from 1 down to rho_min
  static std::vector<double> log_schedule( double rho_min, std::size_t count, double rho_max = 1. )
  {
    if( !( rho_min > 0. && rho_min <= rho_max && rho_max <= 1. ) ) throw ArgumentError( "rho bounds must satisfy 0 < rho_min <= rho_max <= 1" );
    if( count < 1 ) throw ArgumentError( "rho schedule needs at least one point" );
    std::vector<double> r;
    if( count == 1 ) return { rho_max };
    for( std::size_t k = 0; k < count; ++k )
      r.push_back( k == 0 ? rho_max : k + 1 == count ? rho_min : rho_max * std::pow( rho_min / rho_max, double( k ) / double( count - 1 ) ) );
    return r;
  }

  void validate( const Case& c ) const
  {
    if( rho.empty() ) throw ArgumentError( "empty rho schedule" );
    for( std::size_t k = 0; k < rho.size(); ++k ){
      if( !( rho[k] > 0. && rho[k] <= 1. ) ) throw ArgumentError( "rho values must lie in (0,1]" );
      if( k && !( rho[k] < rho[k - 1] ) ) throw ArgumentError( "rho schedule must be strictly decreasing" );
    }
    if( center ){
      if( center->size() != c.dim() ) throw ArgumentError( "centre has the wrong dimension" );
      if( !c.box.contains( *center ) ) throw ArgumentError( "centre lies outside the case box" );
    }
  }
};

struct SweepRow
{
  double rho;
  double err_under, err_over;
  double haus_excess;
  Interval relax, oracle;
  double wall_us;
};

struct SlopeFit
{
  //! Every error in the window is zero: the relaxation is exact there
  bool exact = false;
  double slope = 0., intercept = 0., r2 = 0.;
  std::size_t count = 0;
};

struct ConvergenceReport
{
  std::string case_id, arith;
  std::vector<double> center;
  std::vector<SweepRow> rows;
  //! Lowest Hausdorff excess divided by the oracle scale (1 + max |range|)
  double min_scaled_excess = std::numeric_limits<double>::infinity();
  Validity validity;
};

//! @brief Least-squares slope of log(error) against log(rho) for rows with rho in `window`
//!
//! Needs at least 4 rows with positive error; all-zero errors give the exact sentinel.
template <typename Get>
SlopeFit slope_fit( const std::vector<SweepRow>& rows, const Interval& window, Get err )
{
  SlopeFit f;
  std::vector<double> lx, ly;
  std::size_t in = 0;
  for( auto const& r : rows ){
    if( !window.contains( r.rho ) ) continue;
    ++in;
    const double e = err( r );
    if( e > 0. ){ lx.push_back( std::log( r.rho ) ); ly.push_back( std::log( e ) ); }
  }
  f.count = lx.size();
  if( in > 0 && lx.empty() ){ f.exact = true; return f; }
  if( lx.size() < 4 ) throw ArgumentError( "slope fit needs at least 4 rows with positive error in the window" );
  const double n = double( lx.size() );
  double sx = 0., sy = 0.;
  for( std::size_t k = 0; k < lx.size(); ++k ) sx += lx[k], sy += ly[k];
  const double mx = sx / n, my = sy / n;
  double sxx = 0., sxy = 0., syy = 0.;
  for( std::size_t k = 0; k < lx.size(); ++k ){
    sxx += ( lx[k] - mx ) * ( lx[k] - mx );
    sxy += ( lx[k] - mx ) * ( ly[k] - my );
    syy += ( ly[k] - my ) * ( ly[k] - my );
  }
  if( sxx == 0. ) throw ArgumentError( "slope fit needs distinct rho values" );
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0. ? 1. : sxy * sxy / ( sxx * syy );
  return f;
}

namespace detail {

//! Errors at or below 1e-12 (1 + oracle magnitude) are rounding noise and count as zero
inline double denoise( double e, const SweepRow& r ) { return e > 1e-12 * ( 1. + r.oracle.mag() ) ? e : 0.; }

} // namespace detail

//! @brief Fit of the larger pointwise gap
inline SlopeFit slope_fit_pointwise( const std::vector<SweepRow>& rows, const Interval& window )
{
  return slope_fit( rows, window, []( const SweepRow& r ){ return detail::denoise( std::max( r.err_under, r.err_over ), r ); } );
}

inline SlopeFit slope_fit_hausdorff( const std::vector<SweepRow>& rows, const Interval& window )
{
  return slope_fit( rows, window, []( const SweepRow& r ){ return detail::denoise( r.haus_excess, r ); } );
}

//! @brief Sweep the contraction ratio around the centre and record errors per row
//!
//! Samples are also checked for soundness; the report carries the worst
//! violation. For McCormick the relaxation range is taken over the samples.
inline ConvergenceReport run_case( const Case& c, const SweepConfig& cfg )
{
  cfg.validate( c );
  ConvergenceReport rep;
  rep.case_id = c.id;
  rep.arith = cfg.arith.text();
  rep.center = cfg.center.value_or( c.center );
  for( double rho : cfg.rho ){
    const Box X = box_contract( c.box, rho, rep.center );
    const auto t0 = std::chrono::steady_clock::now();
    const Estimator est( c, cfg.arith, X );
    const auto t1 = std::chrono::steady_clock::now();
    const auto pts = sample_points( X, cfg.grid, cfg.mc_samples, cfg.seed );
    SweepRow row;
    row.rho = rho;
    PointwiseError e;
    double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
    for( auto const& x : pts ){
      const std::span<const double> xs( x );
      const double v = c.value( xs );
      const Bracket b = est.at( xs );
      e.under = std::max( e.under, std::fabs( v - b.under ) );
      e.over = std::max( e.over, std::fabs( b.over - v ) );
      rlo = std::min( rlo, b.under ), rhi = std::max( rhi, b.over );
      const double viol = std::max( { b.under - v, v - b.over, 0. } );
      rep.validity.max_violation = std::max( rep.validity.max_violation, viol );
      rep.validity.max_scaled = std::max( rep.validity.max_scaled, viol / ( 1. + std::fabs( v ) ) );
    }
    row.err_under = e.under;
    row.err_over = e.over;
    row.relax = cfg.arith.kind == ArithSpec::Kind::mccormick ? Interval( rlo, rhi ) : est.range();
    row.oracle = c.oracle_range( X, cfg.oracle_grid, cfg.oracle_samples, cfg.seed );
    row.haus_excess = row.relax.width() - row.oracle.width();
    row.wall_us = cfg.timing ? std::chrono::duration<double, std::micro>( t1 - t0 ).count() : 0.;
    rep.min_scaled_excess = std::min( rep.min_scaled_excess, row.haus_excess / ( 1. + row.oracle.mag() ) );
    rep.rows.push_back( row );
  }
  return rep;
}

inline const char* csv_header() { return "rho,err_under,err_over,haus_excess,relax_lo,relax_hi,oracle_lo,oracle_hi,wall_us"; }

//! @brief One row per rho, every value printed with 17 significant digits
inline void write_csv( std::ostream& os, const ConvergenceReport& rep )
{
  os << csv_header() << "\n";
  char buf[64];
  for( auto const& r : rep.rows ){
    const double v[9] = { r.rho, r.err_under, r.err_over, r.haus_excess, r.relax.lo(), r.relax.hi(), r.oracle.lo(), r.oracle.hi(), r.wall_us };
    for( int k = 0; k < 9; ++k ){
      std::snprintf( buf, sizeof buf, "%.17g", v[k] );
      os << ( k ? "," : "" ) << buf;
    }
    os << "\n";
  }
}

inline void write_csv( const std::string& path, const ConvergenceReport& rep )
{
  std::ofstream out( path );
  if( !out ) throw std::runtime_error( "cannot open '" + path + "' for writing" );
  write_csv( out, rep );
  if( !out ) throw std::runtime_error( "write to '" + path + "' failed" );
}

//! @brief Best-of-k wall time of one relaxation construction on the full box, in microseconds
//!
//! McCormick is timed at the contraction centre.
inline double bench( const Case& c, const ArithSpec& a, std::size_t repeat = 5 )
{
  double best = std::numeric_limits<double>::infinity();
  for( std::size_t k = 0; k < std::max<std::size_t>( repeat, 1 ); ++k ){
    const auto t0 = std::chrono::steady_clock::now();
    if( a.kind == ArithSpec::Kind::mccormick ){
      const McValue v = dag_eval( c.expr, McArith{ c.box, c.center } );
      if( !std::isfinite( v.cv ) ) throw DomainError( "non-finite McCormick value" );
    }
    else{
      const Estimator est( c, a, c.box );
      if( !std::isfinite( est.range().lo() ) ) throw DomainError( "non-finite relaxation range" );
    }
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min( best, std::chrono::duration<double, std::micro>( t1 - t0 ).count() );
  }
  return best;
}

} // namespace suprelax
