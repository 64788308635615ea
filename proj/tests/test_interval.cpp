#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <suprelax/interval.hpp>
#include <suprelax/unary.hpp>

using namespace suprelax;

TEST( Interval, ArithmeticExamples )
{
  EXPECT_EQ( iv_add( Interval( -1., 2. ), Interval( -2., 1. ) ), Interval( -3., 3. ) );
  EXPECT_EQ( iv_mul( Interval( -1., 2. ), Interval( -2., 1. ) ), Interval( -4., 2. ) );
  EXPECT_EQ( iv_neg( Interval( 0.4, 2. ) ), Interval( -2., -0.4 ) );
  EXPECT_EQ( iv_sub( Interval( 0., 1. ), Interval( 0., 1. ) ), Interval( -1., 1. ) );
  EXPECT_EQ( iv_scale( Interval( 1., 2. ), -2. ), Interval( -4., -2. ) );
}

TEST( Interval, RejectsReversedEndpoints )
{
  EXPECT_THROW( Interval( 2., 1. ), ArgumentError );
  EXPECT_THROW( Interval( std::nan( "" ), 1. ), ArgumentError );
}

TEST( Interval, DivisionByIntervalContainingZeroFails )
{
  EXPECT_THROW( iv_div( Interval( 1., 2. ), Interval( -1., 1. ) ), DomainError );
  const Interval q = iv_div( Interval( 1., 2. ), Interval( 2., 4. ) );
  EXPECT_DOUBLE_EQ( q.lo(), 0.25 );
  EXPECT_DOUBLE_EQ( q.hi(), 1. );
}

TEST( Interval, IntersectAndHull )
{
  EXPECT_EQ( intersect( Interval( 0., 2. ), Interval( 1., 3. ) ), Interval( 1., 2. ) );
  EXPECT_THROW( intersect( Interval( 0., 1. ), Interval( 2., 3. ) ), InfeasibleBound );
  EXPECT_EQ( hull( Interval( 0., 1. ), Interval( 2., 3. ) ), Interval( 0., 3. ) );
}

TEST( Interval, ExtensionExamples )
{
  const Interval t = iv_extend( UnaryFunc::tanh(), Interval( -1., 2. ) );
  EXPECT_DOUBLE_EQ( t.lo(), std::tanh( -1. ) );
  EXPECT_DOUBLE_EQ( t.hi(), std::tanh( 2. ) );
  EXPECT_EQ( iv_extend( UnaryFunc::sqr(), Interval( -1., 2. ) ), Interval( 0., 4. ) );
  const Interval e = iv_extend( UnaryFunc::exp(), Interval( 0., 1. ) );
  EXPECT_DOUBLE_EQ( e.lo(), 1. );
  EXPECT_DOUBLE_EQ( e.hi(), std::exp( 1. ) );
}

TEST( Interval, ExtensionOutsideDomainThrows )
{
  EXPECT_THROW( iv_extend( UnaryFunc::log(), Interval( -1., 1. ) ), DomainError );
  EXPECT_THROW( iv_extend( UnaryFunc::inv(), Interval( -1., 1. ) ), DomainError );
  EXPECT_THROW( iv_extend( UnaryFunc::sqrt(), Interval( -1., 1. ) ), DomainError );
}

TEST( Box, ContractExamples )
{
  const Box X = Box::cube( Interval( 0., 1. ), 2 );
  const std::vector<double> c{ 0.5, 0.5 };
  EXPECT_EQ( box_contract( X, 1., c ), X );
  const Box Y = box_contract( Box::cube( Interval( 0.2, 1. ), 2 ), 0.5, c );
  for( auto const& d : Y ){
    EXPECT_NEAR( d.lo(), 0.35, 1e-15 );
    EXPECT_NEAR( d.hi(), 0.75, 1e-15 );
  }
  const Box Z = box_contract( Box::cube( Interval( 0., 10. ), 2 ), 0.1, std::vector<double>{ 4., 4. } );
  for( auto const& d : Z ){
    EXPECT_NEAR( d.lo(), 3.6, 1e-14 );
    EXPECT_NEAR( d.hi(), 4.6, 1e-14 );
  }
}

TEST( Box, ContractRejectsBadInput )
{
  const Box X = Box::cube( Interval( 0., 1. ), 2 );
  EXPECT_THROW( box_contract( X, 0., std::vector<double>{ 0.5, 0.5 } ), ArgumentError );
  EXPECT_THROW( box_contract( X, 1.5, std::vector<double>{ 0.5, 0.5 } ), ArgumentError );
  EXPECT_THROW( box_contract( X, 0.5, std::vector<double>{ 2., 0.5 } ), ArgumentError );
}

// Random operands: each result contains every pointwise combination, and
// shrinking an operand never widens the result.
TEST( Interval, SoundAndIsotoneOnRandomOperands )
{
  std::mt19937_64 rng( 11 );
  std::uniform_real_distribution<double> u( -5., 5. ), t( 0., 1. );
  auto draw = [&]{ double a = u( rng ), b = u( rng ); return Interval( std::min( a, b ), std::max( a, b ) ); };
  auto pick = [&]( const Interval& z ){ return z.lo() + t( rng ) * z.width(); };
  auto sub = [&]( const Interval& z ){ double a = pick( z ), b = pick( z ); return Interval( std::min( a, b ), std::max( a, b ) ); };
  const UnaryFunc fs[] = { UnaryFunc::sqr(), UnaryFunc::exp(), UnaryFunc::tanh(), UnaryFunc::cos(), UnaryFunc::sin(), UnaryFunc::abs(), UnaryFunc::pow( 3 ) };
  for( int k = 0; k < 1000; ++k ){
    const Interval a = draw(), b = draw(), as = sub( a ), bs = sub( b );
    const double x = pick( a ), y = pick( b );
    EXPECT_TRUE( iv_add( a, b ).contains( x + y ) );
    EXPECT_TRUE( iv_sub( a, b ).contains( x - y ) );
    EXPECT_TRUE( iv_mul( a, b ).contains( x * y ) );
    EXPECT_TRUE( iv_mul( a, b ).contains( iv_mul( as, bs ) ) );
    EXPECT_TRUE( iv_add( a, b ).contains( iv_add( as, bs ) ) );
    for( auto const& f : fs ){
      const Interval r = iv_extend( f, a );
      EXPECT_GE( f.eval( x ), r.lo() - 1e-12 * ( 1. + r.mag() ) ) << f.name();
      EXPECT_LE( f.eval( x ), r.hi() + 1e-12 * ( 1. + r.mag() ) ) << f.name();
      EXPECT_TRUE( r.contains( iv_extend( f, as ) ) ) << f.name();
    }
  }
}
