#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "expr.hpp"
#include "interval.hpp"

namespace suprelax {

enum class Activation { relu, linear };

struct MlpLayer
{
  //! Row-major: W[k] holds the weights of output neuron k
  std::vector<std::vector<double>> W;
  std::vector<double> b;
  Activation activation = Activation::relu;
};

//! @brief Feed-forward network with ReLU or linear layers on an input box
struct MlpModel
{
  std::size_t input_dim = 0;
  Box input_box;
  std::vector<MlpLayer> layers;

  std::size_t output_dim() const { return layers.empty() ? input_dim : layers.back().b.size(); }

  //! @brief Throws ModelError naming the first inconsistent layer
  void validate() const
  {
    if( input_dim < 1 ) throw ModelError( "input_dim must be at least 1" );
    if( input_box.size() != input_dim ) throw ModelError( "input_box has the wrong dimension" );
    std::size_t in = input_dim;
    for( std::size_t l = 0; l < layers.size(); ++l ){
      const auto& L = layers[l];
      std::ostringstream os;
      os << "layer " << l << ": ";
      if( L.W.empty() ) throw ModelError( os.str() + "empty weight matrix" );
      if( L.W.size() != L.b.size() ) throw ModelError( os.str() + "bias length does not match weight rows" );
      for( auto const& row : L.W )
        if( row.size() != in ){
          os << "weight row has " << row.size() << " columns, expected " << in;
          throw ModelError( os.str() );
        }
      in = L.W.size();
    }
  }
};

inline Activation parse_activation( const std::string& s, std::size_t layer )
{
  if( s == "relu" ) return Activation::relu;
  if( s == "linear" ) return Activation::linear;
  std::ostringstream os;
  os << "layer " << layer << ": unknown activation '" << s << "'";
  throw ModelError( os.str() );
}

inline MlpModel mlp_from_json( const nlohmann::json& j )
{
  MlpModel m;
  try{
    m.input_dim = j.at( "input_dim" ).get<std::size_t>();
    std::vector<Interval> dims;
    for( auto const& d : j.at( "input_box" ) ) dims.emplace_back( d.at( 0 ).get<double>(), d.at( 1 ).get<double>() );
    m.input_box = Box( std::move( dims ) );
    std::size_t l = 0;
    for( auto const& jl : j.at( "layers" ) ){
      MlpLayer L;
      L.W = jl.at( "W" ).get<std::vector<std::vector<double>>>();
      L.b = jl.at( "b" ).get<std::vector<double>>();
      L.activation = parse_activation( jl.value( "activation", std::string( "relu" ) ), l++ );
      m.layers.push_back( std::move( L ) );
    }
  }
  catch( const nlohmann::json::exception& e ){
    throw ModelError( std::string( "malformed model: " ) + e.what() );
  }
  catch( const ArgumentError& e ){
    throw ModelError( std::string( "malformed model: " ) + e.what() );
  }
  m.validate();
  return m;
}

inline nlohmann::json mlp_to_json( const MlpModel& m )
{
  nlohmann::json j;
  j["input_dim"] = m.input_dim;
  j["input_box"] = nlohmann::json::array();
  for( auto const& d : m.input_box ) j["input_box"].push_back( { d.lo(), d.hi() } );
  j["layers"] = nlohmann::json::array();
  for( auto const& L : m.layers )
    j["layers"].push_back( { { "W", L.W }, { "b", L.b }, { "activation", L.activation == Activation::relu ? "relu" : "linear" } } );
  return j;
}

inline MlpModel load_mlp( const std::string& path )
{
  std::ifstream in( path );
  if( !in ) throw ModelError( "cannot open model file '" + path + "'" );
  nlohmann::json j;
  try{ in >> j; }
  catch( const nlohmann::json::exception& e ){
    throw ModelError( "cannot parse model file '" + path + "': " + e.what() );
  }
  return mlp_from_json( j );
}

//! @brief Seeded random ReLU network: He-scaled normal weights, uniform biases in [-0.5,0.5]
//!
//! widths lists the layer sizes from input to output; the last layer is linear.
inline MlpModel random_mlp( const std::vector<std::size_t>& widths, const Box& box, std::uint64_t seed )
{
  if( widths.size() < 2 || widths.front() != box.size() ) throw ModelError( "layer widths must start with the input dimension" );
  std::mt19937_64 rng( seed );
  std::uniform_real_distribution<double> ub( -0.5, 0.5 );
  MlpModel m;
  m.input_dim = widths.front();
  m.input_box = box;
  for( std::size_t l = 1; l < widths.size(); ++l ){
    MlpLayer L;
    std::normal_distribution<double> nw( 0., std::sqrt( 2. / double( widths[l - 1] ) ) );
    L.W.assign( widths[l], std::vector<double>( widths[l - 1] ) );
    for( auto& row : L.W ) for( auto& w : row ) w = nw( rng );
    L.b.resize( widths[l] );
    for( auto& b : L.b ) b = ub( rng );
    L.activation = l + 1 == widths.size() ? Activation::linear : Activation::relu;
    m.layers.push_back( std::move( L ) );
  }
  return m;
}

//! @brief Plain forward pass
inline std::vector<double> mlp_forward( const MlpModel& m, std::span<const double> x )
{
  std::vector<double> a( x.begin(), x.end() );
  for( auto const& L : m.layers ){
    std::vector<double> z( L.b );
    for( std::size_t k = 0; k < L.W.size(); ++k ){
      for( std::size_t j = 0; j < a.size(); ++j ) z[k] += L.W[k][j] * a[j];
      if( L.activation == Activation::relu ) z[k] = std::max( z[k], 0. );
    }
    a.swap( z );
  }
  return a;
}

//! @brief Expression DAG of the network, one root per output
inline std::vector<Expr> mlp_to_dag( const MlpModel& m, const std::shared_ptr<Graph>& g )
{
  m.validate();
  if( g->dim() != m.input_dim ) throw ModelError( "graph dimension does not match model input_dim" );
  std::vector<Expr> a;
  for( std::size_t j = 0; j < m.input_dim; ++j ) a.push_back( build_var( g, j ) );
  for( auto const& L : m.layers ){
    std::vector<Expr> z;
    for( std::size_t k = 0; k < L.W.size(); ++k ){
      Expr s;
      for( std::size_t j = 0; j < a.size(); ++j ){
        if( L.W[k][j] == 0. ) continue;
        const Expr t = build_affine( a[j], L.W[k][j], 0. );
        s = s.valid() ? build_add( s, t ) : t;
      }
      s = s.valid() ? build_affine( s, 1., L.b[k] ) : build_const( g, L.b[k] );
      if( L.activation == Activation::relu ) s = relu( s );
      z.push_back( s );
    }
    a.swap( z );
  }
  return a;
}

} // namespace suprelax
