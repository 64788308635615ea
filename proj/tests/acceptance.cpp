// Acceptance criteria A1-A10. Prints one PASS/FAIL line per criterion, with
// indented detail lines under it. With no arguments every criterion runs;
// otherwise only the named ones (e.g. "acceptance A3 A7"). Exit code 1 when
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <suprelax/cases.hpp>
#include <suprelax/convergence.hpp>

#include "test_util.hpp"

using namespace suprelax;
using suprelax::testing::linspace;
using suprelax::testing::random_pwl;

namespace {

using Clock = std::chrono::steady_clock;

struct Result
{
  bool pass = true;
  std::vector<std::string> detail;

  void note( const char* fmt, ... ) __attribute__( ( format( printf, 2, 3 ) ) )
  {
    char buf[512];
    va_list ap;
    va_start( ap, fmt );
    std::vsnprintf( buf, sizeof buf, fmt, ap );
    va_end( ap );
    detail.emplace_back( buf );
  }
  //! @brief Record a check; a false condition fails the criterion
  void check( bool ok, const char* fmt, ... ) __attribute__( ( format( printf, 3, 4 ) ) )
  {
    char buf[512];
    va_list ap;
    va_start( ap, fmt );
    std::vsnprintf( buf, sizeof buf, fmt, ap );
    va_end( ap );
    detail.emplace_back( std::string( ok ? "ok   " : "FAIL " ) + buf );
    pass = pass && ok;
  }
};

double seconds_since( Clock::time_point t0 ) { return std::chrono::duration<double>( Clock::now() - t0 ).count(); }

PwlRelax square_of_sum( const Box& X, std::size_t n )
{
  const Case c = ridge_case( UnaryFunc::sqr(), X[0] );
  return dag_eval( c.expr, SupArith<PwlFunction>{ X, n } );
}

//! Deviation from g at the n+1 input grid points; the under may carry extra tangent vertices in between
double alpha( const PwlRelax& F, std::size_t i, Bound side, double ( *g )( double ), std::size_t n )
{
  const PwlFunction& s = side == Bound::under ? F.under()[i] : F.over()[i];
  double worst = 0.;
  for( double x : linspace( s.domain().lo(), s.domain().hi(), n + 1 ) ) worst = std::max( worst, std::fabs( s( x ) - g( x ) ) );
  return worst;
}

Result a1()
{
  Result r;
  const Box X = Box::cube( Interval( 0.2, 1. ), 2 );
  const PwlRelax F = square_of_sum( X, 4 );
  r.check( std::fabs( F.range().lo() - 0.16 ) <= 1e-9 && std::fabs( F.range().hi() - 4. ) <= 1e-9,
           "range [%.17g, %.17g], want [0.16, 4]", F.range().lo(), F.range().hi() );
  double eu = 0., eo = 0.;
  for( std::size_t i = 0; i < 2; ++i ){
    eu = std::max( eu, alpha( F, i, Bound::under, []( double x ){ return ( x + 0.2 ) * ( x + 0.2 ) - 0.08; }, 4 ) );
    eo = std::max( eo, alpha( F, i, Bound::over, []( double x ){ return 2. * x * x; }, 4 ) );
  }
  r.check( eu <= 1e-9, "under-summands vs (x+0.2)^2-0.08 at grid points: max deviation %.3g", eu );
  r.check( eo <= 1e-9, "over-summands vs 2x^2 at grid points: max deviation %.3g", eo );
  double best = INFINITY;
  for( int k = 0; k < 5; ++k ){
    const auto t0 = Clock::now();
    const PwlRelax G = square_of_sum( X, 4 );
    best = std::min( best, seconds_since( t0 ) );
    if( !std::isfinite( G.range().lo() ) ) best = INFINITY;
  }
  r.check( best < 0.01, "construction time %.3g ms (best of 5), limit 10 ms", best * 1e3 );
  return r;
}

Result a2()
{
  Result r;
  const PwlRelax F = square_of_sum( Box::cube( Interval( -1., 2. ), 2 ), 4 );
  r.check( std::fabs( F.range().lo() ) <= 1e-9 && std::fabs( F.range().hi() - 16. ) <= 1e-9,
           "range [%.17g, %.17g], want [0, 16]", F.range().lo(), F.range().hi() );
  double eu = 0.;
  for( std::size_t i = 0; i < 2; ++i )
    eu = std::max( eu, alpha( F, i, Bound::under, []( double x ){ const double m = std::max( x - 1., 0. ); return m * m; }, 4 ) );
  r.check( eu <= 1e-9, "under-summands vs max(x-1,0)^2 at grid points: max deviation %.3g", eu );
  return r;
}

Result a3()
{
  Result r;
  const Case c = ridge_case( UnaryFunc::tanh(), Interval( -0.5, 1. ) );
  ComposeOptions raw;
  raw.auto_intersect = false;
  const PwlRelax F = dag_eval( c.expr, SupArith<PwlFunction>{ c.box, 1, raw } );
  const double lo = std::tanh( -1. ), hi = std::tanh( 2. );
  r.check( std::fabs( F.range().lo() - lo ) <= 1e-9, "under min %.17g, want tanh(-1) = %.17g", F.range().lo(), lo );
  r.check( F.range().hi() > hi, "raw over max %.17g strictly above tanh(2) = %.17g", F.range().hi(), hi );
  const PwlRelax G = sr_intersect( F, Interval( lo, hi ) );
  r.check( std::fabs( G.range().hi() - hi ) <= 1e-9, "after intersection over max %.17g", G.range().hi() );
  double viol = 0.;
  for( double a : linspace( -0.5, 1., 100 ) )
    for( double b : linspace( -0.5, 1., 100 ) ){
      const double x[2] = { a, b }, f = std::tanh( a + b );
      viol = std::max( { viol, ( G.eval_under( x ) - f ) / ( 1. + std::fabs( f ) ), ( f - G.eval_over( x ) ) / ( 1. + std::fabs( f ) ) } );
    }
  r.check( viol <= 1e-8, "soundness after intersection on a 100x100 grid: scaled violation %.3g", viol );
  return r;
}

Result a4()
{
  Result r;
  const auto t0 = Clock::now();
  for( const std::string id : { "cs1", "cs2:2", "cs2:6", "cs3", "mlp:random" } ){
    const Case c = make_case( id );
    for( const std::string a : { "pwl:1", "pwl:8", "pwc:16", "pwc:128" } ){
      const Validity v = validity_check( c, parse_arith( a ), 10000, 1 );
      r.check( v.pass(), "%-10s %-8s scaled violation %.3g", id.c_str(), a.c_str(), v.max_scaled );
    }
  }
  const double t = seconds_since( t0 );
  r.check( t < 60., "total time %.2f s, limit 60 s", t );
  return r;
}

ConvergenceReport sweep( const Case& c, const std::string& arith, const std::vector<double>& rho, std::optional<std::vector<double>> center = std::nullopt )
{
  SweepConfig cfg;
  cfg.case_id = c.id;
  cfg.arith = parse_arith( arith );
  cfg.rho = rho;
  cfg.center = std::move( center );
  cfg.timing = false;
  return run_case( c, cfg );
}

void check_slope( Result& r, const char* what, const SlopeFit& f, double lo, double hi )
{
  if( f.exact ) r.check( false, "%s: exact in the window, no slope", what );
  else r.check( f.slope >= lo && f.slope <= hi, "%s slope %.4f (r2 %.4f, %zu rows), want [%.1f, %.1f]", what, f.slope, f.r2, f.count, lo, hi );
}

Result a5()
{
  Result r;
  const Case c = make_case( "cs1" );
  const auto rho = SweepConfig::log_schedule( 1e-4, 21 );
  const Interval quad( 1e-3, 1e-1 ), lin( 1e-4, 1e-3 );
  for( const std::string a : { "pwl:1", "pwl:2", "pwl:8" } ){
    const ConvergenceReport rep = sweep( c, a, rho );
    check_slope( r, ( a + " pointwise" ).c_str(), slope_fit_pointwise( rep.rows, quad ), 1.7, 2.3 );
    check_slope( r, ( a + " hausdorff" ).c_str(), slope_fit_hausdorff( rep.rows, quad ), 1.7, 2.3 );
    r.check( rep.min_scaled_excess >= -1e-9, "%s lowest scaled hausdorff excess %.3g", a.c_str(), rep.min_scaled_excess );
    r.check( rep.validity.pass(), "%s soundness on sweep samples %.3g", a.c_str(), rep.validity.max_scaled );
  }
  const ConvergenceReport pc = sweep( c, "pwc:128", rho );
  check_slope( r, "pwc:128 pointwise", slope_fit_pointwise( pc.rows, lin ), 0.7, 1.3 );
  r.check( pc.min_scaled_excess >= -1e-9, "pwc:128 lowest scaled hausdorff excess %.3g", pc.min_scaled_excess );
  return r;
}

Result a6()
{
  Result r;
  const auto rho = SweepConfig::log_schedule( 1e-4, 21 );
  const Interval quad( 1e-3, 1e-1 );
  const Case sq = make_case( "ridge:sqr" ), ab = make_case( "ridge:abs" );
  for( const std::vector<double> ctr : { std::vector<double>{ 1., 1. }, { 0., 0. }, { -0.5, 0.5 } } ){
    const ConvergenceReport rep = sweep( sq, "pwl:1", rho, ctr );
    char what[64];
    std::snprintf( what, sizeof what, "sqr ridge around (%g,%g)", ctr[0], ctr[1] );
    check_slope( r, what, slope_fit_pointwise( rep.rows, quad ), 1.7, 2.3 );
  }
  check_slope( r, "abs ridge around (0,0)", slope_fit_pointwise( sweep( ab, "pwl:1", rho, std::vector<double>{ 0., 0. } ).rows, quad ), 0.7, 1.3 );
  for( const std::vector<double> ctr : { std::vector<double>{ 1., 1. }, { -0.5, -0.5 } } ){
    double worst = 0.;
    for( auto const& row : sweep( ab, "pwl:1", rho, ctr ).rows )
      if( row.rho <= 1e-3 ) worst = std::max( { worst, row.err_under, row.err_over } );
    r.check( worst < 1e-12, "abs ridge around (%g,%g): largest gap for rho <= 1e-3 is %.3g", ctr[0], ctr[1], worst );
  }
  return r;
}

Result a7()
{
  Result r;
  struct Item { const char* name; UnaryFunc phi; Interval image; double ( *L )( double, double ); };
  const Item items[] = {
    { "exp on [0,1]", UnaryFunc::exp(), Interval( 0., 1. ), []( double, double b ){ return std::exp( b ); } },
    { "sqr on [-1,2]", UnaryFunc::sqr(), Interval( -1., 2. ), []( double, double ){ return 2.; } },
  };
  std::mt19937_64 rng( 2024 );
  for( auto const& it : items ){
    std::size_t segs = 0, bad_t = 0, bad_s = 0;
    double ratio_t = 0., ratio_s = 0.;
    while( segs < 1000 ){
      const PwlFunction raw = random_pwl( rng, Interval( -1., 2. ), 10, 3. );
      const auto [mn, mx] = pwl_extrema( raw );
      const double s = it.image.width() / ( mx - mn );
      const PwlFunction u = pwl_affine( raw, s, it.image.lo() - s * mn );
      const auto [under, over] = pwl_compose_bracket( u, it.phi );
      const auto& xs = u.breakpoints();
      for( std::size_t k = 0; k < u.size(); ++k, ++segs ){
        const double a = u( xs[k] ), b = u( xs[k + 1] ), w = std::fabs( b - a );
        const double L = it.L( std::min( a, b ), std::max( a, b ) );
        double gu = 0., go = 0.;
        for( double x : linspace( xs[k], xs[k + 1], 201 ) ){
          const double f = it.phi.eval( u( x ) );
          gu = std::max( gu, f - under( x ) ), go = std::max( go, over( x ) - f );
        }
        const double bt = 0.5 * L * w * w, bs = 1.5 * L * w * w;
        bad_t += gu > bt + 1e-12, bad_s += go > bs + 1e-12;
        if( bt > 1e-9 ) ratio_t = std::max( ratio_t, gu / bt );
        if( bs > 1e-9 ) ratio_s = std::max( ratio_s, go / bs );
      }
    }
    r.check( bad_t == 0 && bad_s == 0, "%s: %zu segments, tangent bound violations %zu (worst gap/bound %.3f), secant %zu (%.3f)",
             it.name, segs, bad_t, ratio_t, bad_s, ratio_s );
  }
  return r;
}

Result a8()
{
  Result r;
  const Case c = make_case( "cs3" );
  const Interval oracle = c.oracle_range( c.box, 1001 );
  r.check( std::fabs( oracle.lo() + 6.55 ) <= 0.01 && std::fabs( oracle.hi() - 8.11 ) <= 0.01,
           "oracle range [%.4f, %.4f], reference [-6.55, 8.11]", oracle.lo(), oracle.hi() );
  for( const std::string a : { "pwl:1", "pwl:8", "pwc:128" } ){
    const Interval R = Estimator( c, parse_arith( a ), c.box ).range();
    const double excess = R.width() - oracle.width();
    r.check( R.contains( oracle ) && std::isfinite( excess ) && excess > 0.,
             "%-8s range [%.2f, %.2f] contains the oracle, hausdorff excess %.2f", a.c_str(), R.lo(), R.hi(), excess );
  }
  return r;
}

Result a9()
{
  Result r;
  for( const std::string id : { "cs1", "cs3" } ){
    const Case c = make_case( id );
    std::mt19937_64 rng( 99 );
    std::vector<std::uniform_real_distribution<double>> u;
    for( auto const& d : c.box ) u.emplace_back( d.lo(), d.hi() );
    auto draw = [&]{ std::vector<double> x; for( auto& d : u ) x.push_back( d( rng ) ); return x; };
    auto at = [&]( const std::vector<double>& x ){ return dag_eval( c.expr, McArith{ c.box, x } ); };
    double valid = 0., convex = 0., plane = 0.;
    for( int k = 0; k < 1000; ++k ){
      const auto x = draw(), y = draw();
      std::vector<double> m( x.size() );
      for( std::size_t i = 0; i < x.size(); ++i ) m[i] = 0.5 * ( x[i] + y[i] );
      const McValue vx = at( x ), vy = at( y ), vm = at( m );
      const double f = c.value( x );
      valid = std::max( { valid, ( vx.cv - f ) / ( 1. + std::fabs( f ) ), ( f - vx.cc ) / ( 1. + std::fabs( f ) ) } );
      convex = std::max( { convex, vm.cv - 0.5 * ( vx.cv + vy.cv ), 0.5 * ( vx.cc + vy.cc ) - vm.cc } );
      double lcv = vx.cv, lcc = vx.cc;
      for( std::size_t i = 0; i < x.size(); ++i ) lcv += vx.sub_cv[i] * ( y[i] - x[i] ), lcc += vx.sub_cc[i] * ( y[i] - x[i] );
      plane = std::max( { plane, lcv - vy.cv, vy.cc - lcc } );
    }
    r.check( valid <= 1e-8 && convex <= 1e-8 && plane <= 1e-8,
             "%s McCormick: validity %.3g, convexity %.3g, subgradient planes %.3g (limit 1e-8)", id.c_str(), valid, convex, plane );
  }
  for( const std::string id : { "cs1", "cs2:2", "cs3" } ){
    const Case c = make_case( id );
    const Estimator sup( c, parse_arith( "pwl:8" ), c.box ), mc( c, parse_arith( "mccormick" ), c.box );
    const auto pts = sample_points( c.box, 33, 0, 1 );
    const PointwiseError es = pointwise_error( c.value, [&]( std::span<const double> x ){ return sup.at( x ); }, pts );
    const PointwiseError em = pointwise_error( c.value, [&]( std::span<const double> x ){ return mc.at( x ); }, pts );
    r.check( es.max() <= em.max(), "%-6s rho=1 pointwise error pwl:8 %.4g (under %.4g, over %.4g) vs mccormick %.4g (under %.4g, over %.4g)",
             id.c_str(), es.max(), es.under, es.over, em.max(), em.under, em.over );
  }
  return r;
}

PwlRelax random_relaxation( std::mt19937_64& rng, const Box& X )
{
  std::uniform_real_distribution<double> c( -1., 1. );
  const PwlRelax x = sr_variable<PwlFunction>( 0, X, 2 ), y = sr_variable<PwlFunction>( 1, X, 2 );
  const PwlRelax t = sr_add( sr_affine( x, c( rng ), 0. ), sr_affine( y, c( rng ), c( rng ) ) );
  const PwlRelax s = sr_add( sr_affine( x, c( rng ), 0. ), sr_affine( y, c( rng ), 0. ) );
  return sr_add( sr_compose( t, UnaryFunc::exp() ), sr_affine( sr_compose( s, UnaryFunc::sqr() ), c( rng ), 0. ) );
}

Result a10()
{
  Result r;
  std::mt19937_64 rng( 10 );
  std::uniform_int_distribution<int> nseg( 1, 12 );
  std::uniform_real_distribution<double> ul( -2., 2. ), ut( 0., 1. );
  double add = 0., trunc = 0.;
  for( int t = 0; t < 1000; ++t ){
    const double a = ul( rng ), w = 0.1 + 3. * ut( rng );
    const Interval dom( a, a + w );
    const PwlFunction u = random_pwl( rng, dom, nseg( rng ) ), v = random_pwl( rng, dom, nseg( rng ) );
    const PwlFunction s = pwl_add( u, v );
    const auto [lo, hi] = pwl_extrema( u );
    const double c = lo + ( hi - lo ) * ( 1.2 * ut( rng ) - 0.1 );
    const PwlFunction mx = pwl_truncate( u, c, TruncMode::max ), mn = pwl_truncate( u, c, TruncMode::min );
    std::vector<double> pts = linspace( dom.lo(), dom.hi(), 101 );
    pts.insert( pts.end(), u.breakpoints().begin(), u.breakpoints().end() );
    pts.insert( pts.end(), v.breakpoints().begin(), v.breakpoints().end() );
    for( double x : pts ){
      add = std::max( add, std::fabs( s( x ) - u( x ) - v( x ) ) );
      trunc = std::max( { trunc, std::fabs( mx( x ) - std::max( u( x ), c ) ), std::fabs( mn( x ) - std::min( u( x ), c ) ) } );
    }
  }
  r.check( add <= 1e-12, "addition on 1000 random pairs: max deviation %.3g", add );
  r.check( trunc <= 1e-12, "truncation on 1000 random instances: max deviation %.3g", trunc );

  const Box X{ Interval( -1., 1. ), Interval( 0., 2. ) };
  double aff = 0., inter = 0.;
  std::size_t pairs = 0;
  while( pairs < 100 ){
    const PwlRelax F = random_relaxation( rng, X );
    const double a = 6. * ut( rng ) - 3., b = 6. * ut( rng ) - 3.;
    const PwlRelax G = sr_affine( F, a, b );
    for( int k = 0; k < 100; ++k ){
      const double x[2] = { -1. + 2. * ut( rng ), 2. * ut( rng ) };
      const double lo = F.eval_under( x ), hi = F.eval_over( x );
      aff = std::max( aff, std::fabs( G.eval_under( x ) - ( a >= 0. ? a * lo : a * hi ) - b ) );
      aff = std::max( aff, std::fabs( G.eval_over( x ) - ( a >= 0. ? a * hi : a * lo ) - b ) );
    }
    const Interval R = F.range();
    double p = R.lo() + ( 1.4 * ut( rng ) - 0.2 ) * R.width(), q = R.lo() + ( 1.4 * ut( rng ) - 0.2 ) * R.width();
    if( p > q ) std::swap( p, q );
    if( q < R.lo() || p > R.hi() ) continue;
    const Interval want = intersect( R, Interval( p, q ) ), got = sr_intersect( F, Interval( p, q ) ).range();
    inter = std::max( { inter, std::fabs( got.lo() - want.lo() ) / ( 1. + R.mag() ), std::fabs( got.hi() - want.hi() ) / ( 1. + R.mag() ) } );
    ++pairs;
  }
  r.check( aff <= 1e-12, "affine maps on 100 relaxations: max deviation %.3g", aff );
  r.check( inter <= 1e-12, "intersection ranges on %zu bound/relaxation pairs: max scaled deviation %.3g", pairs, inter );
  return r;
}

} // namespace

int main( int argc, char** argv )
{
  const std::vector<std::pair<std::string, std::function<Result()>>> all = {
    { "A1", a1 }, { "A2", a2 }, { "A3", a3 }, { "A4", a4 }, { "A5", a5 },
    { "A6", a6 }, { "A7", a7 }, { "A8", a8 }, { "A9", a9 }, { "A10", a10 },
  };
  std::vector<std::string> want( argv + 1, argv + argc );
  for( auto const& w : want ){
    bool known = false;
    for( auto const& [id, fn] : all ) known = known || id == w;
    if( !known ){ std::fprintf( stderr, "unknown criterion '%s'\n", w.c_str() ); return 2; }
  }
  int failed = 0;
  for( auto const& [id, fn] : all ){
    if( !want.empty() && std::find( want.begin(), want.end(), id ) == want.end() ) continue;
    const auto t0 = Clock::now();
    Result res;
    try{ res = fn(); }
    catch( const std::exception& e ){
      res.pass = false;
      res.detail.push_back( std::string( "exception: " ) + e.what() );
    }
    std::printf( "%s %s (%.2f s)\n", res.pass ? "PASS" : "FAIL", id.c_str(), seconds_since( t0 ) );
    for( auto const& d : res.detail ) std::printf( "    %s\n", d.c_str() );
    std::fflush( stdout );
    failed += !res.pass;
  }
  return failed ? 1 : 0;
}
