// Bounds for exp(x0 - x1) * (x0 + x1)^2 on [0,1]^2 in interval, McCormick and superposition arithmetic.

#include <cstdio>

#include <suprelax/expr.hpp>

using namespace suprelax;

int main()
{
  auto g = make_graph( 2 );
  const Expr x = build_var( g, 0 ), y = build_var( g, 1 );
  const Expr f = exp( x - y ) * sqr( x + y );
  const Box X = Box::cube( Interval( 0., 1. ), 2 );

  const Interval iv = dag_eval( f, IntervalArith{ X } );
  std::printf( "interval      [%.6f, %.6f]\n", iv.lo(), iv.hi() );
  for( std::size_t n : { 1u, 4u, 16u } ){
    const PwlRelax F = dag_eval( f, SupArith<PwlFunction>{ X, n } );
    std::printf( "pwl n_ini=%-3zu [%.6f, %.6f]\n", n, F.range().lo(), F.range().hi() );
  }
  // the two enclosures are incomparable; intersecting keeps the better end of each
  const PwlRelax G = sr_intersect( dag_eval( f, SupArith<PwlFunction>{ X, 16 } ), iv );
  std::printf( "pwl16 & iv    [%.6f, %.6f]\n", G.range().lo(), G.range().hi() );
  const PwcRelax C = dag_eval( f, SupArith<PwcPair>{ X, 64 } );
  std::printf( "pwc n_ini=64  [%.6f, %.6f]\n", C.range().lo(), C.range().hi() );

  // pointwise comparison at the centre
  const double p[2] = { 0.5, 0.5 };
  const PwlRelax F = dag_eval( f, SupArith<PwlFunction>{ X, 4 } );
  const McValue m = dag_eval( f, McArith{ X, { 0.5, 0.5 } } );
  std::printf( "at (0.5,0.5): f = %.6f, pwl [%.6f, %.6f], mccormick [%.6f, %.6f]\n", dag_eval( f, RealArith{ { 0.5, 0.5 } } ),
               F.eval_under( p ), F.eval_over( p ), m.cv, m.cc );
  return 0;
}
