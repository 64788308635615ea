#pragma once

#include <cstring>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "mccormick.hpp"
#include "suprelax.hpp"
#include "unary.hpp"

namespace suprelax {

enum class NodeKind { var, cnst, add, sub, affine, mul, min2, max2, unary };

inline const char* kind_name( NodeKind k )
{
  switch( k ){
    case NodeKind::var:    return "var";
    case NodeKind::cnst:   return "const";
    case NodeKind::add:    return "add";
    case NodeKind::sub:    return "sub";
    case NodeKind::affine: return "affine";
    case NodeKind::mul:    return "mul";
    case NodeKind::min2:   return "min2";
    case NodeKind::max2:   return "max2";
    case NodeKind::unary:  return "unary";
  }
  return "?";
}

//! @brief One node of a factorable expression DAG
struct ExprNode
{
  NodeKind kind = NodeKind::cnst;
  std::size_t index = 0;              // var
  double a = 0., b = 0.;              // cnst value in a; affine a*x + b
  UnaryFunc phi = UnaryFunc::neg();   // unary
  std::vector<std::size_t> children;
};

//! @brief Hash-consed DAG; node ids are a topological order
class Graph
{
public:
  explicit Graph( std::size_t dim ): _dim( dim )
  {
    if( dim < 1 ) throw ArgumentError( "expression dimension must be at least 1" );
  }

  std::size_t dim() const { return _dim; }
  std::size_t size() const { return _nodes.size(); }
  const ExprNode& node( std::size_t id ) const { return _nodes.at( id ); }

  std::size_t intern( ExprNode n )
  {
    if( n.kind == NodeKind::var && n.index >= _dim ){
      std::ostringstream os;
      os << "variable index " << n.index << " outside dimension " << _dim;
      throw ArgumentError( os.str() );
    }
    for( auto c : n.children )
      if( c >= _nodes.size() ) throw ArgumentError( "child node does not belong to this graph" );
    const std::string key = _key( n );
    auto it = _index.find( key );
    if( it != _index.end() ) return it->second;
    _nodes.push_back( std::move( n ) );
    _index.emplace( key, _nodes.size() - 1 );
    return _nodes.size() - 1;
  }

  //! @brief Nodes reachable from the roots, ascending
  std::vector<std::size_t> reachable( std::span<const std::size_t> roots ) const
  {
    std::vector<char> mark( _nodes.size(), 0 );
    std::vector<std::size_t> stack( roots.begin(), roots.end() );
    while( !stack.empty() ){
      const std::size_t k = stack.back();
      stack.pop_back();
      if( mark.at( k ) ) continue;
      mark[k] = 1;
      for( auto c : _nodes[k].children ) stack.push_back( c );
    }
    std::vector<std::size_t> ids;
    for( std::size_t k = 0; k < mark.size(); ++k ) if( mark[k] ) ids.push_back( k );
    return ids;
  }

private:
  static std::string _key( const ExprNode& n )
  {
    std::string k;
    auto put = [&]( const void* p, std::size_t s ){ k.append( static_cast<const char*>( p ), s ); };
    const int kind = static_cast<int>( n.kind );
    put( &kind, sizeof kind );
    put( &n.index, sizeof n.index );
    put( &n.a, sizeof n.a );
    put( &n.b, sizeof n.b );
    if( n.kind == NodeKind::unary ){
      const int uk = static_cast<int>( n.phi.kind() ), p = n.phi.exponent();
      const double c = n.phi.constant();
      put( &uk, sizeof uk ); put( &p, sizeof p ); put( &c, sizeof c );
    }
    for( auto c : n.children ) put( &c, sizeof c );
    return k;
  }

  std::size_t _dim;
  std::vector<ExprNode> _nodes;
  std::unordered_map<std::string, std::size_t> _index;
};

//! @brief Handle to a node of a shared graph
class Expr
{
public:
  Expr() = default;
  Expr( std::shared_ptr<Graph> g, std::size_t id ): _g( std::move( g ) ), _id( id ) {}

  const std::shared_ptr<Graph>& graph() const { return _g; }
  std::size_t id() const { return _id; }
  const ExprNode& node() const { return _g->node( _id ); }
  bool valid() const { return static_cast<bool>( _g ); }

  Expr make( ExprNode n ) const { return Expr( _g, _g->intern( std::move( n ) ) ); }

private:
  std::shared_ptr<Graph> _g;
  std::size_t _id = 0;
};

inline std::shared_ptr<Graph> make_graph( std::size_t dim ) { return std::make_shared<Graph>( dim ); }

inline Expr build_var( const std::shared_ptr<Graph>& g, std::size_t i )
{
  ExprNode n; n.kind = NodeKind::var; n.index = i;
  return Expr( g, g->intern( n ) );
}
inline Expr build_const( const std::shared_ptr<Graph>& g, double c )
{
  ExprNode n; n.kind = NodeKind::cnst; n.a = c;
  return Expr( g, g->intern( n ) );
}

namespace detail {

inline void check_graph( const Expr& x, const Expr& y )
{
  if( x.graph() != y.graph() ) throw ArgumentError( "operands belong to different expression graphs" );
}

inline Expr binary( NodeKind k, const Expr& x, const Expr& y )
{
  check_graph( x, y );
  ExprNode n; n.kind = k; n.children = { x.id(), y.id() };
  return x.make( n );
}

} // namespace detail

inline Expr build_affine( const Expr& x, double a, double b )
{
  if( a == 1. && b == 0. ) return x;
  ExprNode n; n.kind = NodeKind::affine; n.a = a; n.b = b; n.children = { x.id() };
  return x.make( n );
}
inline Expr build_unary( const Expr& x, const UnaryFunc& phi )
{
  if( phi.kind() == UnaryKind::neg ) return build_affine( x, -1., 0. );
  ExprNode n; n.kind = NodeKind::unary; n.phi = phi; n.children = { x.id() };
  return x.make( n );
}
inline Expr build_add( const Expr& x, const Expr& y ) { return detail::binary( NodeKind::add, x, y ); }
inline Expr build_sub( const Expr& x, const Expr& y ) { return detail::binary( NodeKind::sub, x, y ); }
inline Expr build_mul( const Expr& x, const Expr& y ) { return detail::binary( NodeKind::mul, x, y ); }
inline Expr build_min2( const Expr& x, const Expr& y ) { return detail::binary( NodeKind::min2, x, y ); }
inline Expr build_max2( const Expr& x, const Expr& y ) { return detail::binary( NodeKind::max2, x, y ); }
//! @brief x / y normalized to x * inv(y)
inline Expr build_div( const Expr& x, const Expr& y ) { return build_mul( x, build_unary( y, UnaryFunc::inv() ) ); }
//! @brief x^p; p = 2 becomes sqr, p = 1 the operand itself
inline Expr build_pow( const Expr& x, int p )
{
  if( p == 1 ) return x;
  return build_unary( x, UnaryFunc::pow( p ) );
}

inline Expr operator+( const Expr& x, const Expr& y ) { return build_add( x, y ); }
inline Expr operator-( const Expr& x, const Expr& y ) { return build_sub( x, y ); }
inline Expr operator*( const Expr& x, const Expr& y ) { return build_mul( x, y ); }
inline Expr operator/( const Expr& x, const Expr& y ) { return build_div( x, y ); }
inline Expr operator-( const Expr& x ) { return build_affine( x, -1., 0. ); }
inline Expr operator+( const Expr& x, double b ) { return build_affine( x, 1., b ); }
inline Expr operator+( double b, const Expr& x ) { return build_affine( x, 1., b ); }
inline Expr operator-( const Expr& x, double b ) { return build_affine( x, 1., -b ); }
inline Expr operator-( double b, const Expr& x ) { return build_affine( x, -1., b ); }
inline Expr operator*( double a, const Expr& x ) { return build_affine( x, a, 0. ); }
inline Expr operator*( const Expr& x, double a ) { return build_affine( x, a, 0. ); }
inline Expr operator/( const Expr& x, double a ) { return build_affine( x, 1. / a, 0. ); }

inline Expr exp( const Expr& x ) { return build_unary( x, UnaryFunc::exp() ); }
inline Expr log( const Expr& x ) { return build_unary( x, UnaryFunc::log() ); }
inline Expr sqrt( const Expr& x ) { return build_unary( x, UnaryFunc::sqrt() ); }
inline Expr tanh( const Expr& x ) { return build_unary( x, UnaryFunc::tanh() ); }
inline Expr cos( const Expr& x ) { return build_unary( x, UnaryFunc::cos() ); }
inline Expr sin( const Expr& x ) { return build_unary( x, UnaryFunc::sin() ); }
inline Expr abs( const Expr& x ) { return build_unary( x, UnaryFunc::abs() ); }
inline Expr sqr( const Expr& x ) { return build_unary( x, UnaryFunc::sqr() ); }
inline Expr inv( const Expr& x ) { return build_unary( x, UnaryFunc::inv() ); }
inline Expr relu( const Expr& x ) { return build_unary( x, UnaryFunc::max_const( 0. ) ); }
inline Expr pow( const Expr& x, int p ) { return build_pow( x, p ); }
inline Expr min2( const Expr& x, const Expr& y ) { return build_min2( x, y ); }
inline Expr max2( const Expr& x, const Expr& y ) { return build_max2( x, y ); }

//! @brief Real arithmetic at a point
struct RealArith
{
  using value_type = double;
  std::vector<double> x;

  double var( std::size_t i ) const { return x.at( i ); }
  double cnst( double c ) const { return c; }
  double add( double a, double b ) const { return a + b; }
  double sub( double a, double b ) const { return a - b; }
  double affine( double v, double a, double b ) const { return a * v + b; }
  double mul( double a, double b ) const { return a * b; }
  double min2( double a, double b ) const { return std::min( a, b ); }
  double max2( double a, double b ) const { return std::max( a, b ); }
  double unary( double v, const UnaryFunc& f ) const
  {
    f.check_domain( Interval( v ) );
    return f.eval( v );
  }
};

//! @brief Natural interval extension on a box
struct IntervalArith
{
  using value_type = Interval;
  Box box;

  Interval var( std::size_t i ) const { return box[i]; }
  Interval cnst( double c ) const { return Interval( c ); }
  Interval add( const Interval& a, const Interval& b ) const { return a + b; }
  Interval sub( const Interval& a, const Interval& b ) const { return a - b; }
  Interval affine( const Interval& v, double a, double b ) const { return iv_shift( iv_scale( v, a ), b ); }
  Interval mul( const Interval& a, const Interval& b ) const { return a * b; }
  Interval min2( const Interval& a, const Interval& b ) const { return { std::min( a.lo(), b.lo() ), std::min( a.hi(), b.hi() ) }; }
  Interval max2( const Interval& a, const Interval& b ) const { return { std::max( a.lo(), b.lo() ), std::max( a.hi(), b.hi() ) }; }
  Interval unary( const Interval& v, const UnaryFunc& f ) const { return iv_extend( f, v ); }
};

//! @brief McCormick relaxations at a point of a box
struct McArith
{
  using value_type = McValue;
  Box box;
  std::vector<double> x;

  McValue var( std::size_t i ) const { return mc_var( i, box, x ); }
  McValue cnst( double c ) const { return mc_const( c, box.size() ); }
  McValue add( const McValue& a, const McValue& b ) const { return mc_add( a, b ); }
  McValue sub( const McValue& a, const McValue& b ) const { return mc_sub( a, b ); }
  McValue affine( const McValue& v, double a, double b ) const { return mc_affine( v, a, b ); }
  McValue mul( const McValue& a, const McValue& b ) const { return mc_mul( a, b ); }
  McValue min2( const McValue& a, const McValue& b ) const { return mc_min( a, b ); }
  McValue max2( const McValue& a, const McValue& b ) const { return mc_max( a, b ); }
  McValue unary( const McValue& v, const UnaryFunc& f ) const { return mc_compose( v, f ); }
};

//! @brief Superposition relaxation on a box, summands of type S
template <typename S>
struct SupArith
{
  using value_type = SupRelax<S>;
  Box box;
  std::size_t n_ini = 1;
  ComposeOptions compose{};
  MulStrategy mul_strategy = MulStrategy::dc;

  value_type var( std::size_t i ) const { return sr_variable<S>( i, box, n_ini ); }
  value_type cnst( double c ) const { return sr_constant<S>( box, c, n_ini ); }
  value_type add( const value_type& a, const value_type& b ) const { return sr_add( a, b ); }
  value_type sub( const value_type& a, const value_type& b ) const { return sr_sub( a, b ); }
  value_type affine( const value_type& v, double a, double b ) const { return sr_affine( v, a, b ); }
  value_type mul( const value_type& a, const value_type& b ) const { return sr_mul( a, b, mul_strategy ); }
  value_type min2( const value_type& a, const value_type& b ) const { return sr_min( a, b ); }
  value_type max2( const value_type& a, const value_type& b ) const { return sr_max( a, b ); }
  value_type unary( const value_type& v, const UnaryFunc& f ) const { return sr_compose( v, f, compose ); }
};

namespace detail {

template <typename E>
[[noreturn]] void rethrow_at( const E& e, std::size_t id, const ExprNode& n )
{
  std::ostringstream os;
  os << "node #" << id << " (" << kind_name( n.kind );
  if( n.kind == NodeKind::unary ) os << " " << n.phi.name();
  os << "): " << e.what();
  throw E( os.str() );
}

} // namespace detail

//! @brief Evaluate several roots in one topological pass; each reachable node once
template <typename A>
std::vector<typename A::value_type> dag_eval( const Graph& g, std::span<const std::size_t> roots, const A& ar )
{
  using V = typename A::value_type;
  const auto ids = g.reachable( roots );
  std::vector<std::unique_ptr<V>> val( g.size() );
  for( auto id : ids ){
    const ExprNode& n = g.node( id );
    auto ch = [&]( std::size_t k ) -> const V& { return *val[n.children[k]]; };
    try{
      switch( n.kind ){
        case NodeKind::var:    val[id] = std::make_unique<V>( ar.var( n.index ) ); break;
        case NodeKind::cnst:   val[id] = std::make_unique<V>( ar.cnst( n.a ) ); break;
        case NodeKind::add:    val[id] = std::make_unique<V>( ar.add( ch( 0 ), ch( 1 ) ) ); break;
        case NodeKind::sub:    val[id] = std::make_unique<V>( ar.sub( ch( 0 ), ch( 1 ) ) ); break;
        case NodeKind::affine: val[id] = std::make_unique<V>( ar.affine( ch( 0 ), n.a, n.b ) ); break;
        case NodeKind::mul:    val[id] = std::make_unique<V>( ar.mul( ch( 0 ), ch( 1 ) ) ); break;
        case NodeKind::min2:   val[id] = std::make_unique<V>( ar.min2( ch( 0 ), ch( 1 ) ) ); break;
        case NodeKind::max2:   val[id] = std::make_unique<V>( ar.max2( ch( 0 ), ch( 1 ) ) ); break;
        case NodeKind::unary:  val[id] = std::make_unique<V>( ar.unary( ch( 0 ), n.phi ) ); break;
      }
    }
    catch( const DomainError& e ){ detail::rethrow_at( e, id, n ); }
    catch( const ArgumentError& e ){ detail::rethrow_at( e, id, n ); }
    catch( const InfeasibleBound& e ){ detail::rethrow_at( e, id, n ); }
  }
  std::vector<V> out;
  for( auto r : roots ) out.push_back( *val.at( r ) );
  return out;
}

template <typename A>
typename A::value_type dag_eval( const Expr& root, const A& ar )
{
  const std::size_t id = root.id();
  return dag_eval( *root.graph(), std::span<const std::size_t>( &id, 1 ), ar ).front();
}

} // namespace suprelax
