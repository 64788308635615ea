// suprelax command-line harness: convergence sweeps, soundness checks, timing, ranges.
// Exit codes: 0 pass, 1 assertion or evaluation failure, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <suprelax/cases.hpp>
#include <suprelax/convergence.hpp>

using namespace suprelax;

namespace {

struct ConfigError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string fmt( double v )
{
  char buf[64];
  std::snprintf( buf, sizeof buf, "%.17g", v );
  return buf;
}

std::string fmt( const Interval& v ) { return "[" + fmt( v.lo() ) + "," + fmt( v.hi() ) + "]"; }

// Case and arithmetic lookups are configuration; anything they throw maps to exit code 2.
Case load_case( const std::string& id )
{
  try{ return make_case( id ); }
  catch( const ArgumentError& e ){ throw ConfigError( e.what() ); }
  catch( const ModelError& e ){ throw ConfigError( e.what() ); }
}

ArithSpec load_arith( const std::string& s )
{
  try{ return parse_arith( s ); }
  catch( const ArgumentError& e ){ throw ConfigError( e.what() ); }
}

std::optional<std::vector<double>> load_center( const std::string& s )
{
  if( s.empty() ) return std::nullopt;
  try{ return detail::parse_list( s, "centre" ); }
  catch( const ArgumentError& e ){ throw ConfigError( e.what() ); }
}

struct Common
{
  std::string case_id, arith = "pwl:1", center;
  std::uint64_t seed = 1;
};

void add_common( CLI::App* c, Common& o )
{
  c->add_option( "--case", o.case_id, "cs1 | cs2:<n> | cs3 | mlp:random | mlp:<path> | ridge:<func>[:lo,hi]" )->required();
  c->add_option( "--arith", o.arith, "pwl:<k> | pwc:<k> | mccormick | interval" )->capture_default_str();
  c->add_option( "--center", o.center, "contraction centre, comma separated (default: the case centre)" );
  c->add_option( "--seed", o.seed, "seed for Monte-Carlo samples" )->capture_default_str();
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Superposition relaxation benchmark harness" };
  app.require_subcommand( 1 );

  Common o;
  double rho_min = 1e-5, rho_max = 1., fit_lo = 0., fit_hi = 0., rho = 1.;
  std::size_t rho_count = 25, grid = 33, mc = 100000, oracle_grid = 1001, samples = 10000, repeat = 5;
  std::string out = "-", timing = "on";
  std::vector<std::size_t> widths{ 2, 10, 10, 1 };
  std::vector<double> box{ -3., 3. };

  auto* sweep = app.add_subcommand( "sweep", "contraction sweep, one CSV row per rho" );
  add_common( sweep, o );
  sweep->add_option( "--rho-min", rho_min, "smallest contraction ratio" )->capture_default_str();
  sweep->add_option( "--rho-max", rho_max, "largest contraction ratio" )->capture_default_str();
  sweep->add_option( "--rho-count", rho_count, "number of log-spaced ratios" )->capture_default_str();
  sweep->add_option( "--grid", grid, "sample points per dimension (n <= 3)" )->capture_default_str();
  sweep->add_option( "--mc-samples", mc, "Monte-Carlo samples (n > 3)" )->capture_default_str();
  sweep->add_option( "--oracle-grid", oracle_grid, "oracle grid points per dimension (n <= 3)" )->capture_default_str();
  sweep->add_option( "--out", out, "CSV path, '-' for stdout" )->capture_default_str();
  sweep->add_option( "--timing", timing, "on | off; off writes wall_us = 0" )->check( CLI::IsMember( { "on", "off" } ) )->capture_default_str();
  sweep->add_option( "--fit-min", fit_lo, "lower end of the slope-fit window" );
  sweep->add_option( "--fit-max", fit_hi, "upper end of the slope-fit window" );

  auto* check = app.add_subcommand( "check", "soundness on seeded uniform samples of the full box" );
  add_common( check, o );
  check->add_option( "--samples", samples, "number of samples" )->capture_default_str();

  auto* benchc = app.add_subcommand( "bench", "best-of-k construction time on the full box" );
  add_common( benchc, o );
  benchc->add_option( "--repeat", repeat, "repetitions" )->capture_default_str();

  auto* range = app.add_subcommand( "range", "relaxation and oracle ranges on one contracted box" );
  add_common( range, o );
  range->add_option( "--rho", rho, "contraction ratio" )->capture_default_str();
  range->add_option( "--oracle-grid", oracle_grid, "oracle grid points per dimension (n <= 3)" )->capture_default_str();

  auto* gen = app.add_subcommand( "mlp-random", "write a seeded random ReLU network as JSON" );
  gen->add_option( "--widths", widths, "layer widths from input to output" )->delimiter( ',' )->capture_default_str();
  gen->add_option( "--box", box, "input box lo,hi applied to every input" )->delimiter( ',' )->capture_default_str();
  gen->add_option( "--seed", o.seed, "seed" )->capture_default_str();
  gen->add_option( "--out", out, "JSON path, '-' for stdout" )->capture_default_str();

  try{
    app.parse( argc, argv );
  }
  catch( const CLI::ParseError& e ){
    const int rc = app.exit( e );
    return rc == 0 ? 0 : 2;
  }

  try{
    if( *gen ){
      if( box.size() != 2 || !( box[0] <= box[1] ) || widths.empty() ) throw ConfigError( "--box must be lo,hi and --widths non-empty" );
      MlpModel m;
      try{ m = random_mlp( widths, Box::cube( Interval( box[0], box[1] ), widths.front() ), o.seed ); }
      catch( const ModelError& e ){ throw ConfigError( e.what() ); }
      const std::string s = mlp_to_json( m ).dump( 1 );
      if( out == "-" ) std::cout << s << "\n";
      else{
        std::ofstream f( out );
        if( !( f << s << "\n" ) ){ std::cerr << "error: cannot write '" << out << "'\n"; return 1; }
      }
      return 0;
    }

    const Case c = load_case( o.case_id );
    const ArithSpec a = load_arith( o.arith );
    const auto center = load_center( o.center );

    if( *sweep ){
      SweepConfig cfg;
      cfg.case_id = c.id;
      cfg.arith = a;
      cfg.center = center;
      cfg.grid = grid;
      cfg.mc_samples = mc;
      cfg.oracle_grid = oracle_grid;
      cfg.seed = o.seed;
      cfg.timing = timing == "on";
      try{
        cfg.rho = SweepConfig::log_schedule( rho_min, rho_count, rho_max );
        cfg.validate( c );
        if( grid < 2 || oracle_grid < 2 ) throw ArgumentError( "grids need at least 2 points per dimension" );
      }
      catch( const ArgumentError& e ){ throw ConfigError( e.what() ); }
      const ConvergenceReport rep = run_case( c, cfg );
      if( out == "-" ) write_csv( std::cout, rep );
      else write_csv( out, rep );
      int rc = 0;
      if( !rep.validity.pass() ){
        std::cerr << "FAIL soundness: max violation " << fmt( rep.validity.max_violation ) << "\n";
        rc = 1;
      }
      if( rep.min_scaled_excess < -1e-9 ){
        std::cerr << "FAIL Hausdorff excess below tolerance: " << fmt( rep.min_scaled_excess ) << "\n";
        rc = 1;
      }
      if( fit_hi > 0. ){
        if( !( fit_lo > 0. && fit_lo <= fit_hi ) ) throw ConfigError( "fit window must satisfy 0 < fit-min <= fit-max" );
        try{
          const Interval w( fit_lo, fit_hi );
          const SlopeFit p = slope_fit_pointwise( rep.rows, w ), h = slope_fit_hausdorff( rep.rows, w );
          auto show = []( const char* what, const SlopeFit& f ){
            if( f.exact ) std::cerr << what << " exact\n";
            else std::cerr << what << " slope " << fmt( f.slope ) << " r2 " << fmt( f.r2 ) << " rows " << f.count << "\n";
          };
          show( "pointwise", p );
          show( "hausdorff", h );
        }
        catch( const ArgumentError& e ){
          std::cerr << "FAIL slope fit: " << e.what() << "\n";
          rc = 1;
        }
      }
      return rc;
    }

    if( *check ){
      const Validity v = validity_check( c, a, samples, o.seed );
      std::cout << ( v.pass() ? "PASS" : "FAIL" ) << " " << c.id << " " << a.text() << " max_violation " << fmt( v.max_violation )
                << " scaled " << fmt( v.max_scaled ) << "\n";
      return v.pass() ? 0 : 1;
    }

    if( *benchc ){
      const double us = bench( c, a, repeat );
      std::cout << c.id << " " << a.text() << " best_of_" << repeat << "_us " << fmt( us ) << "\n";
      return 0;
    }

    if( *range ){
      Box X = c.box;
      try{ X = box_contract( c.box, rho, center.value_or( c.center ) ); }
      catch( const ArgumentError& e ){ throw ConfigError( e.what() ); }
      const Estimator est( c, a, X );
      Interval r = est.range();
      if( a.kind == ArithSpec::Kind::mccormick ){
        // McCormick has no separable bound; report the sampled estimator extremes
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for( auto const& x : sample_points( X, 33, 100000, o.seed ) ){
          const Bracket b = est.at( x );
          lo = std::min( lo, b.under ), hi = std::max( hi, b.over );
        }
        r = Interval( lo, hi );
      }
      std::cout << "relaxation " << fmt( r ) << " oracle " << fmt( c.oracle_range( X, oracle_grid ) ) << "\n";
      return 0;
    }
  }
  catch( const ConfigError& e ){
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  catch( const std::exception& e ){
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
