#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <suprelax/cases.hpp>
#include <suprelax/expr.hpp>
#include <suprelax/mccormick.hpp>

using namespace suprelax;

namespace {

double dot( const std::vector<double>& g, const std::vector<double>& y, const std::vector<double>& x )
{
  double s = 0.;
  for( std::size_t i = 0; i < g.size(); ++i ) s += g[i] * ( y[i] - x[i] );
  return s;
}

} // namespace

TEST( McCormick, BilinearAtCentre )
{
  const Box X = Box::cube( Interval( 0., 1. ), 2 );
  const std::vector<double> p{ 0.5, 0.5 };
  const McValue v = mc_mul( mc_var( 0, X, p ), mc_var( 1, X, p ) );
  EXPECT_DOUBLE_EQ( v.cv, 0. );
  EXPECT_DOUBLE_EQ( v.cc, 0.5 );
  EXPECT_EQ( v.range, Interval( 0., 1. ) );
}

TEST( McCormick, ExpOfVariable )
{
  const Box X{ Interval( 0., 1. ) };
  const std::vector<double> p{ 0.5 };
  const McValue v = mc_compose( mc_var( 0, X, p ), UnaryFunc::exp() );
  EXPECT_NEAR( v.cv, std::exp( 0.5 ), 1e-15 );
  EXPECT_NEAR( v.cc, 1. + ( std::exp( 1. ) - 1. ) * 0.5, 1e-15 );
  EXPECT_NEAR( v.sub_cv[0], std::exp( 0.5 ), 1e-15 );
  EXPECT_NEAR( v.sub_cc[0], std::exp( 1. ) - 1., 1e-15 );
}

TEST( McCormick, AffineCombinationsAreExact )
{
  const Box X = Box::cube( Interval( -1., 3. ), 2 );
  const std::vector<double> m = X.midpoint();
  const McValue s = mc_add( mc_var( 0, X, m ), mc_var( 1, X, m ) );
  EXPECT_EQ( s.cv, 2. );
  EXPECT_EQ( s.cc, 2. );
  const McValue a = mc_affine( s, -2., 1. );
  EXPECT_EQ( a.cv, -3. );
  EXPECT_EQ( a.cc, -3. );
  EXPECT_EQ( a.sub_cv, ( std::vector<double>{ -2., -2. } ) );
}

TEST( McCormick, CompositionRejectsRangesOutsideTheDomain )
{
  const Box X{ Interval( -1., 1. ) };
  const std::vector<double> p{ 0.5 };
  EXPECT_THROW( mc_compose( mc_var( 0, X, p ), UnaryFunc::log() ), DomainError );
}

class McProperties : public ::testing::TestWithParam<std::string>
{
};

// Validity, convexity of cv / concavity of cc, and the subgradient planes
TEST_P( McProperties, ValidConvexWithSubgradients )
{
  const Case c = make_case( GetParam() );
  std::mt19937_64 rng( 123 );
  std::vector<std::uniform_real_distribution<double>> u;
  for( auto const& d : c.box ) u.emplace_back( d.lo(), d.hi() );
  auto draw = [&]{ std::vector<double> x; for( auto& d : u ) x.push_back( d( rng ) ); return x; };
  auto at = [&]( const std::vector<double>& x ){ return dag_eval( c.expr, McArith{ c.box, x } ); };
  for( int k = 0; k < 1000; ++k ){
    const std::vector<double> x = draw(), y = draw();
    std::vector<double> m( x.size() );
    for( std::size_t i = 0; i < x.size(); ++i ) m[i] = 0.5 * ( x[i] + y[i] );
    const McValue vx = at( x ), vy = at( y ), vm = at( m );
    const double f = c.value( x );
    ASSERT_LE( vx.cv, f + 1e-8 * ( 1. + std::fabs( f ) ) );
    ASSERT_GE( vx.cc, f - 1e-8 * ( 1. + std::fabs( f ) ) );
    ASSERT_TRUE( vx.range.contains( vx.cv ) && vx.range.contains( vx.cc ) );
    EXPECT_LE( vm.cv, 0.5 * ( vx.cv + vy.cv ) + 1e-10 * ( 1. + std::fabs( vm.cv ) ) );
    EXPECT_GE( vm.cc, 0.5 * ( vx.cc + vy.cc ) - 1e-10 * ( 1. + std::fabs( vm.cc ) ) );
    EXPECT_GE( vy.cv, vx.cv + dot( vx.sub_cv, y, x ) - 1e-8 * ( 1. + std::fabs( vy.cv ) ) );
    EXPECT_LE( vy.cc, vx.cc + dot( vx.sub_cc, y, x ) + 1e-8 * ( 1. + std::fabs( vy.cc ) ) );
  }
}

INSTANTIATE_TEST_SUITE_P( Cases, McProperties, ::testing::Values( "cs1", "cs3", "cs2:2", "mlp:random" ),
                          []( const ::testing::TestParamInfo<std::string>& i ){
                            std::string s = i.param;
                            for( auto& ch : s ) if( !std::isalnum( static_cast<unsigned char>( ch ) ) ) ch = '_';
                            return s;
                          } );
