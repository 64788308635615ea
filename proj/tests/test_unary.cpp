#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include <suprelax/unary.hpp>

using namespace suprelax;

namespace {

const double pi = std::numbers::pi;

std::vector<UnaryFunc> catalog()
{
  return { UnaryFunc::sqr(), UnaryFunc::pow( 3 ), UnaryFunc::pow( 4 ), UnaryFunc::pow( 5 ), UnaryFunc::exp(), UnaryFunc::log(),
           UnaryFunc::sqrt(), UnaryFunc::inv(), UnaryFunc::tanh(), UnaryFunc::cos(), UnaryFunc::sin() };
}

// Sample domain where every catalog entry is defined and smooth
Interval safe_domain( const UnaryFunc& f )
{
  switch( f.kind() ){
    case UnaryKind::log:
    case UnaryKind::sqrt:
    case UnaryKind::inv: return { 0.3, 4. };
    default: return { -3., 3. };
  }
}

} // namespace

TEST( Unary, TanhSegmentsAtZero )
{
  const auto s = segment( UnaryFunc::tanh(), Interval( -1., 2. ) );
  ASSERT_EQ( s.inflections.size(), 1u );
  EXPECT_EQ( s.inflections[0], 0. );
  ASSERT_EQ( s.pieces.size(), 2u );
  EXPECT_EQ( s.pieces[0].curvature, Curvature::convex );
  EXPECT_EQ( s.pieces[1].curvature, Curvature::concave );
  EXPECT_EQ( s.pieces[0].monotonicity, Monotonicity::nondecreasing );
  EXPECT_EQ( s.pieces[1].monotonicity, Monotonicity::nondecreasing );
}

TEST( Unary, ExpIsOneConvexPiece )
{
  const auto s = segment( UnaryFunc::exp(), Interval( -1., 1. ) );
  EXPECT_TRUE( s.inflections.empty() );
  ASSERT_EQ( s.pieces.size(), 1u );
  EXPECT_EQ( s.pieces[0].curvature, Curvature::convex );
  EXPECT_EQ( s.pieces[0].monotonicity, Monotonicity::nondecreasing );
}

TEST( Unary, SqrIsNonmonotoneWithMinimizerAtZero )
{
  const auto s = segment( UnaryFunc::sqr(), Interval( -2., 4. ) );
  ASSERT_EQ( s.pieces.size(), 1u );
  EXPECT_EQ( s.pieces[0].curvature, Curvature::convex );
  EXPECT_EQ( s.pieces[0].monotonicity, Monotonicity::nonmonotone );
  EXPECT_NEAR( s.pieces[0].sigma_star, 0., 1e-12 );
}

TEST( Unary, NonincreasingPieces )
{
  const auto inv = segment( UnaryFunc::inv(), Interval( 0.5, 2. ) );
  EXPECT_EQ( inv.pieces[0].curvature, Curvature::convex );
  EXPECT_EQ( inv.pieces[0].monotonicity, Monotonicity::nonincreasing );
  const auto neg = segment( UnaryFunc::inv(), Interval( -2., -0.5 ) );
  EXPECT_EQ( neg.pieces[0].curvature, Curvature::concave );
  EXPECT_EQ( neg.pieces[0].monotonicity, Monotonicity::nonincreasing );
}

TEST( Unary, CosOnThreeHalfTurnsHasFourAddends )
{
  const Interval z( 0., 3. * pi );
  const auto s = segment( UnaryFunc::cos(), z );
  ASSERT_EQ( s.inflections.size(), 3u );
  EXPECT_NEAR( s.inflections[0], 0.5 * pi, 1e-14 );
  EXPECT_NEAR( s.inflections[2], 2.5 * pi, 1e-14 );
  const auto terms = dc_terms( UnaryFunc::cos(), z );
  ASSERT_EQ( terms.size(), 4u );
  for( double x = z.lo(); x <= z.hi(); x += 0.01 ){
    double sum = 0.;
    for( auto const& t : terms ) sum += t.eval( x );
    EXPECT_NEAR( sum, std::cos( x ), 1e-10 ) << x;
  }
}

// Each addend keeps one curvature on the domain: check the midpoint inequality
TEST( Unary, AddendsReconstructAndKeepCurvature )
{
  std::mt19937_64 rng( 3 );
  for( auto const& f : { UnaryFunc::tanh(), UnaryFunc::sin(), UnaryFunc::cos(), UnaryFunc::pow( 3 ), UnaryFunc::pow( 5 ) } ){
    const Interval z( -4., 5. );
    const auto terms = dc_terms( f, z );
    std::uniform_real_distribution<double> u( z.lo(), z.hi() );
    for( int k = 0; k < 500; ++k ){
      const double a = u( rng ), b = u( rng );
      double sum = 0.;
      for( auto const& t : terms ){
        sum += t.eval( a );
        const double sg = t.curvature() == Curvature::convex ? 1. : -1.;
        const double mid = t.eval( 0.5 * ( a + b ) ), chord = 0.5 * ( t.eval( a ) + t.eval( b ) );
        EXPECT_LE( sg * ( mid - chord ), 1e-9 * ( 1. + std::fabs( chord ) ) ) << f.name();
      }
      EXPECT_NEAR( sum, f.eval( a ), 1e-10 * ( 1. + std::fabs( f.eval( a ) ) ) ) << f.name() << " at " << a;
    }
  }
}

TEST( Unary, DerivativesMatchFiniteDifferences )
{
  std::mt19937_64 rng( 5 );
  for( auto const& f : catalog() ){
    const Interval d = safe_domain( f );
    std::uniform_real_distribution<double> u( d.lo() + 1e-3, d.hi() - 1e-3 );
    for( int k = 0; k < 200; ++k ){
      const double x = u( rng ), h = 1e-6;
      const double fd = ( f.eval( x + h ) - f.eval( x - h ) ) / ( 2. * h );
      EXPECT_NEAR( f.deriv( x ), fd, 1e-6 * ( 1. + std::fabs( fd ) ) ) << f.name() << " at " << x;
    }
  }
}

TEST( Unary, KinkedFunctionsHaveOneSidedDerivatives )
{
  EXPECT_EQ( UnaryFunc::abs().deriv( 0., Side::left ), -1. );
  EXPECT_EQ( UnaryFunc::abs().deriv( 0., Side::right ), 1. );
  const UnaryFunc r = UnaryFunc::max_const( 0. );
  EXPECT_EQ( r.deriv( 0., Side::left ), 0. );
  EXPECT_EQ( r.deriv( 0., Side::right ), 1. );
  EXPECT_TRUE( r.is_pwl() );
  EXPECT_FALSE( UnaryFunc::exp().is_pwl() );
}

TEST( Unary, ExtensionMatchesDenseScan )
{
  std::mt19937_64 rng( 9 );
  for( auto const& f : catalog() ){
    const Interval d = safe_domain( f );
    std::uniform_real_distribution<double> u( d.lo(), d.hi() );
    for( int k = 0; k < 50; ++k ){
      double a = u( rng ), b = u( rng );
      if( a > b ) std::swap( a, b );
      const Interval r = iv_extend( f, Interval( a, b ) );
      double lo = INFINITY, hi = -INFINITY;
      for( int j = 0; j <= 2000; ++j ){
        const double v = f.eval( a + ( b - a ) * j / 2000. );
        lo = std::min( lo, v ), hi = std::max( hi, v );
      }
      const double tol = 1e-12 * ( 1. + r.mag() );
      EXPECT_LE( r.lo(), lo + tol ) << f.name();
      EXPECT_GE( r.hi(), hi - tol ) << f.name();
      // exact up to the scan resolution
      EXPECT_NEAR( r.lo(), lo, 1e-4 * ( 1. + r.mag() ) ) << f.name();
      EXPECT_NEAR( r.hi(), hi, 1e-4 * ( 1. + r.mag() ) ) << f.name();
    }
  }
}

TEST( Unary, DomainErrorsNameTheRange )
{
  try{
    UnaryFunc::log().check_domain( Interval( 0., 1. ) );
    FAIL() << "log accepted a range touching 0";
  }
  catch( const DomainError& e ){
    EXPECT_NE( std::string( e.what() ).find( "log" ), std::string::npos );
    EXPECT_NE( std::string( e.what() ).find( "[0,1]" ), std::string::npos );
  }
  EXPECT_NO_THROW( UnaryFunc::sqrt().check_domain( Interval( 0., 1. ) ) );
  EXPECT_THROW( UnaryFunc::inv().check_domain( Interval( -1., 0. ) ), DomainError );
}

TEST( Unary, ParseNames )
{
  EXPECT_EQ( parse_unary( "relu" ), UnaryFunc::max_const( 0. ) );
  EXPECT_EQ( parse_unary( "pow3" ), UnaryFunc::pow( 3 ) );
  EXPECT_EQ( parse_unary( "min:0.5" ), UnaryFunc::min_const( 0.5 ) );
  EXPECT_THROW( parse_unary( "gamma" ), ArgumentError );
}
