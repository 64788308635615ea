// Output bounds of a ReLU network read from JSON, on its input box and on a small box around its centre.
// Usage: mlp_bounds [model.json]

#include <cstdio>
#include <exception>

#include <suprelax/cases.hpp>

using namespace suprelax;

int main( int argc, char** argv )
{
  try{
    const MlpModel m = argc > 1 ? load_mlp( argv[1] ) : builtin_random_mlp();
    auto g = make_graph( m.input_dim );
    const Expr out = mlp_to_dag( m, g ).front();
    std::vector<double> c;
    for( auto const& d : m.input_box ) c.push_back( d.mid() );
    for( double rho : { 1., 0.1, 0.01 } ){
      const Box X = box_contract( m.input_box, rho, c );
      const Interval iv = dag_eval( out, IntervalArith{ X } );
      const PwlRelax F = dag_eval( out, SupArith<PwlFunction>{ X, 4 } );
      std::printf( "rho %-5g interval [%9.4f, %9.4f]  pwl:4 [%9.4f, %9.4f]\n", rho, iv.lo(), iv.hi(), F.range().lo(), F.range().hi() );
    }
  }
  catch( const std::exception& e ){
    std::fprintf( stderr, "error: %s\n", e.what() );
    return 1;
  }
  return 0;
}
