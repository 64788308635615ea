#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "pwc.hpp"
#include "pwl.hpp"
#include "unary.hpp"

namespace suprelax {

//! @brief Convex view of one inflection-decomposition addend, clamped to the composition range
//!
//! sign = -1 turns a concave addend into a convex profile.
class Profile
{
public:
  Profile( const AddendSpec& a, double sign, const Interval& z ): _a( a ), _sign( sign ), _z( z ) {}

  double eval( double x ) const { return _sign * _a.eval( _clamp( x ) ); }
  double deriv( double x, Side s ) const { return _sign * _a.deriv( _clamp( x ), s ); }
  Interval iv_extend( const Interval& w ) const
  {
    const Interval r = _a.iv_extend( Interval( _clamp( w.lo() ), _clamp( w.hi() ) ) );
    return _sign > 0. ? r : iv_neg( r );
  }
  Monotonicity monotonicity() const
  {
    const auto m = _a.monotonicity();
    if( _sign > 0. || m == Monotonicity::nonmonotone ) return m;
    return m == Monotonicity::nondecreasing ? Monotonicity::nonincreasing : Monotonicity::nondecreasing;
  }
  double sigma_star() const { return _a.sigma_star(); }
  double sign() const { return _sign; }
  //! @brief Profile is a piecewise-linear catalog function, composed by truncation
  bool exact() const { return _a.is_plain() && _a.phi().is_pwl(); }
  const UnaryFunc& phi() const { return _a.phi(); }

private:
  double _clamp( double x ) const { return std::min( std::max( x, _z.lo() ), _z.hi() ); }
  const AddendSpec& _a;
  double _sign;
  Interval _z;
};

//! @brief Summand operations required by SupRelax
template <typename S> struct SummandTraits;

template <>
struct SummandTraits<PwlFunction>
{
  static PwlFunction identity( const Interval& X, std::size_t n ) { return PwlFunction::identity( X, n ); }
  static PwlFunction constant( const Interval& X, std::size_t, double c ) { return PwlFunction::constant( X, c ); }
  static PwlFunction constant_like( const PwlFunction& u, double c ) { return PwlFunction::constant( u.domain(), c ); }
  static PwlFunction add( const PwlFunction& u, const PwlFunction& v ) { return pwl_add( u, v ); }
  static PwlFunction affine( const PwlFunction& u, double a, double b ) { return pwl_affine( u, a, b ); }
  static PwlFunction truncate( const PwlFunction& u, double c, TruncMode m ) { return pwl_truncate( u, c, m ); }
  static std::pair<double, double> extrema( const PwlFunction& u, Bound ) { return pwl_extrema( u ); }
  static double eval( const PwlFunction& u, double x, Bound ) { return u.eval( x ); }
  static const Interval& domain( const PwlFunction& u ) { return u.domain(); }
  static bool same( const PwlFunction& u, const PwlFunction& v )
  {
    return u.breakpoints() == v.breakpoints() && u.vertex_values() == v.vertex_values();
  }
  static bool equal( const PwlFunction& u, const PwlFunction& v ) { return same( u, v ); }
  static std::size_t complexity( const PwlFunction& u ) { return u.size(); }

  static PwlFunction apply( const PwlFunction& u, const Profile& p, Bound want )
  {
    if( p.exact() ){
      const UnaryFunc& f = p.phi();
      PwlFunction r;
      switch( f.kind() ){
        case UnaryKind::neg: r = pwl_affine( u, -1., 0. ); break;
        case UnaryKind::abs:
          r = pwl_add( pwl_truncate( u, 0., TruncMode::max ), pwl_truncate( pwl_affine( u, -1., 0. ), 0., TruncMode::max ) );
          break;
        case UnaryKind::max_const: r = pwl_truncate( u, f.constant(), TruncMode::max ); break;
        default: r = pwl_truncate( u, f.constant(), TruncMode::min ); break;
      }
      return p.sign() > 0. ? r : pwl_affine( r, -1., 0. );
    }
    auto [lo, hi] = pwl_compose_bracket( u, p );
    return want == Bound::under ? lo : hi;
  }
};

template <>
struct SummandTraits<PwcPair>
{
  static PwcPair identity( const Interval& X, std::size_t n ) { return PwcPair::identity( X, n ); }
  static PwcPair constant( const Interval& X, std::size_t n, double c ) { return PwcPair::constant( X, n, c ); }
  static PwcPair constant_like( const PwcPair& u, double c ) { return PwcPair::constant( u.domain(), u.size(), c ); }
  static PwcPair add( const PwcPair& u, const PwcPair& v ) { return pwc_add( u, v ); }
  static PwcPair affine( const PwcPair& u, double a, double b ) { return pwc_affine( u, a, b ); }
  static PwcPair truncate( const PwcPair& u, double c, TruncMode m ) { return pwc_truncate( u, c, m ); }
  static std::pair<double, double> extrema( const PwcPair& u, Bound side ) { return pwc_extrema( u, side ); }
  static double eval( const PwcPair& u, double x, Bound side ) { return u.eval( x, side ); }
  static const Interval& domain( const PwcPair& u ) { return u.domain(); }
  static bool same( const PwcPair& u, const PwcPair& v )
  {
    if( u.size() != v.size() ) return false;
    for( std::size_t k = 0; k < u.size(); ++k )
      if( !u[k].is_degenerate() || !( u[k] == v[k] ) ) return false;
    return true;
  }
  static bool equal( const PwcPair& u, const PwcPair& v )
  {
    if( u.size() != v.size() || !( u.domain() == v.domain() ) ) return false;
    for( std::size_t k = 0; k < u.size(); ++k )
      if( !( u[k] == v[k] ) ) return false;
    return true;
  }
  static std::size_t complexity( const PwcPair& u ) { return u.size(); }

  static PwcPair apply( const PwcPair& u, const Profile& p, Bound )
  {
    return pwc_apply( u, [&]( const Interval& c ){ return p.iv_extend( c ); } );
  }
};

//! @brief Separable under- and overestimators of a function on a box
template <typename S>
class SupRelax
{
public:
  using Traits = SummandTraits<S>;

  SupRelax() = default;
  SupRelax( Box box, std::vector<S> under, std::vector<S> over )
  : _box( std::move( box ) ), _under( std::move( under ) ), _over( std::move( over ) )
  {
    if( _under.size() != _box.size() || _over.size() != _box.size() )
      throw ArgumentError( "summand count does not match box dimension" );
    double lo = 0., hi = 0.;
    for( std::size_t i = 0; i < _box.size(); ++i ){
      lo += Traits::extrema( _under[i], Bound::under ).first;
      hi += Traits::extrema( _over[i], Bound::over ).second;
    }
    _range = Interval( lo, std::max( lo, hi ) );
  }

  const Box& box() const { return _box; }
  std::size_t size() const { return _box.size(); }
  const std::vector<S>& under() const { return _under; }
  const std::vector<S>& over() const { return _over; }
  const Interval& range() const { return _range; }

  double eval_under( std::span<const double> x ) const { return _eval( x, _under, Bound::under ); }
  double eval_over( std::span<const double> x ) const { return _eval( x, _over, Bound::over ); }

private:
  double _eval( std::span<const double> x, const std::vector<S>& f, Bound side ) const
  {
    if( !_box.contains( x ) && !_near_box( x ) ){
      std::ostringstream os;
      os << "point outside relaxation box " << _box;
      throw ArgumentError( os.str() );
    }
    double s = 0.;
    for( std::size_t i = 0; i < f.size(); ++i ) s += Traits::eval( f[i], x[i], side );
    return s;
  }
  bool _near_box( std::span<const double> x ) const
  {
    if( x.size() != _box.size() ) return false;
    for( std::size_t i = 0; i < x.size(); ++i ){
      const double tol = 1e-12 * ( 1. + _box[i].mag() );
      if( x[i] < _box[i].lo() - tol || x[i] > _box[i].hi() + tol ) return false;
    }
    return true;
  }

  Box _box;
  std::vector<S> _under, _over;
  Interval _range;
};

using PwlRelax = SupRelax<PwlFunction>;
using PwcRelax = SupRelax<PwcPair>;

template <typename S> Interval sr_range( const SupRelax<S>& F ) { return F.range(); }
template <typename S> double sr_eval_under( const SupRelax<S>& F, std::span<const double> x ) { return F.eval_under( x ); }
template <typename S> double sr_eval_over( const SupRelax<S>& F, std::span<const double> x ) { return F.eval_over( x ); }

//! @brief Per-side active sets, weights and aggregates of a relaxation
struct CompositionContext
{
  struct SideData
  {
    std::vector<bool> active;
    std::vector<double> theta;
    std::vector<double> min, max;
    //! Sum of summand minima (under) or maxima (over)
    double aggregate = 0.;
    std::size_t count = 0;
  };
  SideData under, over;
};

namespace detail {

template <typename S>
CompositionContext::SideData side_data( const std::vector<S>& f, Bound side )
{
  CompositionContext::SideData d;
  const std::size_t n = f.size();
  d.active.assign( n, false );
  d.theta.assign( n, 0. );
  d.min.resize( n );
  d.max.resize( n );
  double wsum = 0.;
  for( std::size_t i = 0; i < n; ++i ){
    auto [mn, mx] = SummandTraits<S>::extrema( f[i], side );
    d.min[i] = mn, d.max[i] = mx;
    d.aggregate += side == Bound::under ? mn : mx;
    const double w = mx - mn;
    if( w > 1e-12 * ( 1. + std::max( std::fabs( mn ), std::fabs( mx ) ) ) ){
      d.active[i] = true;
      ++d.count;
      wsum += w;
    }
  }
  for( std::size_t i = 0; i < n; ++i )
    if( d.active[i] ) d.theta[i] = ( d.max[i] - d.min[i] ) / wsum;
  return d;
}

} // namespace detail

template <typename S>
CompositionContext make_context( const SupRelax<S>& F )
{
  return { detail::side_data( F.under(), Bound::under ), detail::side_data( F.over(), Bound::over ) };
}

template <typename S>
SupRelax<S> sr_variable( std::size_t i, const Box& box, std::size_t n_ini )
{
  if( i >= box.size() ) throw ArgumentError( "variable index outside box dimension" );
  using T = SummandTraits<S>;
  std::vector<S> f;
  for( std::size_t j = 0; j < box.size(); ++j )
    f.push_back( j == i ? T::identity( box[j], n_ini ) : T::constant( box[j], n_ini, 0. ) );
  return SupRelax<S>( box, f, f );
}

//! @brief Constant c, spread as c/n over the summands
template <typename S>
SupRelax<S> sr_constant( const Box& box, double c, std::size_t n_ini )
{
  using T = SummandTraits<S>;
  std::vector<S> f;
  for( std::size_t j = 0; j < box.size(); ++j ) f.push_back( T::constant( box[j], n_ini, c / double( box.size() ) ) );
  return SupRelax<S>( box, f, f );
}

namespace detail {

template <typename S>
void check_same_box( const SupRelax<S>& F, const SupRelax<S>& G )
{
  if( !( F.box() == G.box() ) ){
    std::ostringstream os;
    os << "relaxation boxes " << F.box() << " and " << G.box() << " differ";
    throw ArgumentError( os.str() );
  }
}

} // namespace detail

template <typename S>
SupRelax<S> sr_add( const SupRelax<S>& F, const SupRelax<S>& G )
{
  detail::check_same_box( F, G );
  using T = SummandTraits<S>;
  std::vector<S> u, o;
  for( std::size_t i = 0; i < F.size(); ++i ){
    u.push_back( T::add( F.under()[i], G.under()[i] ) );
    o.push_back( T::add( F.over()[i], G.over()[i] ) );
  }
  return SupRelax<S>( F.box(), std::move( u ), std::move( o ) );
}

//! @brief a*F + b, with b spread as b/n; a < 0 swaps the two sides
template <typename S>
SupRelax<S> sr_affine( const SupRelax<S>& F, double a, double b )
{
  using T = SummandTraits<S>;
  const double bn = b / double( F.size() );
  std::vector<S> u, o;
  for( std::size_t i = 0; i < F.size(); ++i ){
    if( a >= 0. ){
      u.push_back( T::affine( F.under()[i], a, bn ) );
      o.push_back( T::affine( F.over()[i], a, bn ) );
    }
    else{
      u.push_back( T::affine( F.over()[i], a, bn ) );
      o.push_back( T::affine( F.under()[i], a, bn ) );
    }
  }
  return SupRelax<S>( F.box(), std::move( u ), std::move( o ) );
}

template <typename S>
SupRelax<S> sr_sub( const SupRelax<S>& F, const SupRelax<S>& G ) { return sr_add( F, sr_affine( G, -1., 0. ) ); }

//! @brief Range-tightening intersection with an a priori bound
template <typename S>
SupRelax<S> sr_intersect( const SupRelax<S>& F, const Interval& bound )
{
  using T = SummandTraits<S>;
  const Interval r = intersect( F.range(), bound );
  (void)r;
  const auto ctx = make_context( F );
  const std::size_t n = F.size();
  const double L = std::max( ctx.under.aggregate, bound.lo() );
  const double U = std::min( ctx.over.aggregate, bound.hi() );
  std::vector<S> u, o;
  for( std::size_t i = 0; i < n; ++i ){
    const S& fu = F.under()[i];
    if( ctx.under.count == 0 ) u.push_back( T::constant_like( fu, L / double( n ) ) );
    else if( !ctx.under.active[i] ) u.push_back( T::constant_like( fu, 0. ) );
    else{
      const S arg = T::affine( fu, 1., ctx.under.aggregate - ctx.under.min[i] );
      u.push_back( T::affine( T::truncate( arg, bound.lo(), TruncMode::max ), 1., -( 1. - ctx.under.theta[i] ) * L ) );
    }
    const S& fo = F.over()[i];
    if( ctx.over.count == 0 ) o.push_back( T::constant_like( fo, U / double( n ) ) );
    else if( !ctx.over.active[i] ) o.push_back( T::constant_like( fo, 0. ) );
    else{
      const S arg = T::affine( fo, 1., ctx.over.aggregate - ctx.over.max[i] );
      o.push_back( T::affine( T::truncate( arg, bound.hi(), TruncMode::min ), 1., -( 1. - ctx.over.theta[i] ) * U ) );
    }
  }
  return SupRelax<S>( F.box(), std::move( u ), std::move( o ) );
}

namespace detail {

//! Which argument transformation feeds the convex profile
enum class Clip { none, below_star, above_star };

template <typename S>
struct ComposeKernel
{
  using T = SummandTraits<S>;
  const SupRelax<S>& F;
  const CompositionContext& ctx;
  const Profile& psi;
  std::size_t n;

  double star() const { return psi.sigma_star(); }

  S clip( const S& arg, Clip c ) const
  {
    if( c == Clip::below_star ) return T::truncate( arg, star(), TruncMode::min );
    if( c == Clip::above_star ) return T::truncate( arg, star(), TruncMode::max );
    return arg;
  }
  double clip( double z, Clip c ) const
  {
    if( c == Clip::below_star ) return std::min( z, star() );
    if( c == Clip::above_star ) return std::max( z, star() );
    return z;
  }

  //! Underestimator summands of psi(clip(.)) for nondecreasing psi o clip, anchored at the lower aggregate
  std::vector<S> under_lower( Clip c ) const
  {
    const auto& d = ctx.under;
    const double pa = psi.eval( clip( d.aggregate, c ) );
    std::vector<S> r;
    for( std::size_t i = 0; i < n; ++i ){
      const S& g = F.under()[i];
      if( d.count == 0 ) r.push_back( T::constant_like( g, pa / double( n ) ) );
      else if( !d.active[i] ) r.push_back( T::constant_like( g, 0. ) );
      else{
        const S arg = clip( T::affine( g, 1., d.aggregate - d.min[i] ), c );
        r.push_back( T::affine( T::apply( arg, psi, Bound::under ), 1., -( 1. - d.theta[i] ) * pa ) );
      }
    }
    return r;
  }
  //! Underestimator summands for nonincreasing psi o clip, anchored at the upper aggregate
  std::vector<S> under_upper( Clip c ) const
  {
    const auto& d = ctx.over;
    const double pa = psi.eval( clip( d.aggregate, c ) );
    std::vector<S> r;
    for( std::size_t i = 0; i < n; ++i ){
      const S& g = F.over()[i];
      if( d.count == 0 ) r.push_back( T::constant_like( g, pa / double( n ) ) );
      else if( !d.active[i] ) r.push_back( T::constant_like( g, 0. ) );
      else{
        const S arg = clip( T::affine( g, 1., d.aggregate - d.max[i] ), c );
        r.push_back( T::affine( T::apply( arg, psi, Bound::under ), 1., -( 1. - d.theta[i] ) * pa ) );
      }
    }
    return r;
  }
  //! Perspective overestimator summands built on side s (over side for nondecreasing, under side for nonincreasing)
  std::vector<S> over_perspective( Bound s, Clip c ) const
  {
    const auto& d = s == Bound::over ? ctx.over : ctx.under;
    const auto& f = s == Bound::over ? F.over() : F.under();
    const double pa = psi.eval( clip( d.aggregate, c ) );
    std::vector<S> r;
    for( std::size_t i = 0; i < n; ++i ){
      const S& g = f[i];
      if( d.count == 0 ) r.push_back( T::constant_like( g, pa / double( n ) ) );
      else if( !d.active[i] ) r.push_back( T::constant_like( g, 0. ) );
      else{
        const double th = d.theta[i];
        const double ext = s == Bound::over ? d.max[i] : d.min[i];
        const S arg = clip( T::affine( g, 1. / th, d.aggregate - ext / th ), c );
        r.push_back( T::affine( T::apply( arg, psi, Bound::over ), th, 0. ) );
      }
    }
    return r;
  }

  //! Adds -c split by the weights of one side (equally when that side is inactive)
  void subtract_spread( std::vector<S>& r, const CompositionContext::SideData& d, double c ) const
  {
    for( std::size_t i = 0; i < n; ++i ){
      const double w = d.count == 0 ? 1. / double( n ) : d.theta[i];
      if( w != 0. ) r[i] = T::affine( r[i], 1., -w * c );
    }
  }

  static std::vector<S> add( const std::vector<S>& a, const std::vector<S>& b )
  {
    std::vector<S> r;
    for( std::size_t i = 0; i < a.size(); ++i ) r.push_back( T::add( a[i], b[i] ) );
    return r;
  }

  bool exact_argument() const
  {
    for( std::size_t i = 0; i < n; ++i )
      if( !T::same( F.under()[i], F.over()[i] ) ) return false;
    return true;
  }

  SupRelax<S> run() const
  {
    std::vector<S> u, o;
    switch( psi.monotonicity() ){
      case Monotonicity::nondecreasing:
        u = under_lower( Clip::none );
        o = over_perspective( Bound::over, Clip::none );
        break;
      case Monotonicity::nonincreasing:
        u = under_upper( Clip::none );
        o = over_perspective( Bound::under, Clip::none );
        break;
      case Monotonicity::nonmonotone: {
        const double ps = psi.eval( star() );
        u = add( under_upper( Clip::below_star ), under_lower( Clip::above_star ) );
        subtract_spread( u, ctx.under, ps );
        if( exact_argument() ) o = over_perspective( Bound::over, Clip::none );
        else{
          o = add( over_perspective( Bound::under, Clip::below_star ), over_perspective( Bound::over, Clip::above_star ) );
          subtract_spread( o, ctx.over, ps );
        }
        break;
      }
    }
    return SupRelax<S>( F.box(), std::move( u ), std::move( o ) );
  }
};

} // namespace detail

//! @brief Options for unary composition
struct ComposeOptions
{
  //! Intersect with the interval image of the range; unset means on for
  //! functions needing an inflection split, off otherwise
  std::optional<bool> auto_intersect;
};

//! @brief Relaxation of one inflection-decomposition addend composed with F
template <typename S>
SupRelax<S> sr_compose_addend( const SupRelax<S>& F, const AddendSpec& a )
{
  const double sign = a.curvature() == Curvature::convex ? 1. : -1.;
  const Interval z = F.range();
  const Profile psi( a, sign, z );
  const auto ctx = make_context( F );
  const SupRelax<S> R = detail::ComposeKernel<S>{ F, ctx, psi, F.size() }.run();
  return sign > 0. ? R : sr_affine( R, -1., 0. );
}

//! @brief Relaxation of phi o F
template <typename S>
SupRelax<S> sr_compose( const SupRelax<S>& F, const UnaryFunc& phi, const ComposeOptions& opt = {} )
{
  const Interval z = F.range();
  phi.check_domain( z );
  if( phi.kind() == UnaryKind::neg ) return sr_affine( F, -1., 0. );
  const auto terms = dc_terms( phi, z );
  SupRelax<S> R = sr_compose_addend( F, terms[0] );
  for( std::size_t k = 1; k < terms.size(); ++k ) R = sr_add( R, sr_compose_addend( F, terms[k] ) );
  if( opt.auto_intersect.value_or( terms.size() > 1 ) ) R = sr_intersect( R, iv_extend( phi, z ) );
  return R;
}

template <typename S> SupRelax<S> sr_relu( const SupRelax<S>& F ) { return sr_compose( F, UnaryFunc::max_const( 0. ) ); }

enum class MulStrategy { dc, log };

//! @brief Product F*G
//!
//! dc: centre and scale each factor to [-1,1], form the difference of the
//! squared half-sum and half-difference, then undo the scaling.
template <typename S>
SupRelax<S> sr_mul( const SupRelax<S>& F, const SupRelax<S>& G, MulStrategy strategy = MulStrategy::dc )
{
  detail::check_same_box( F, G );
  if( strategy == MulStrategy::log ){
    if( !( F.range().lo() > 0. && G.range().lo() > 0. ) ){
      std::ostringstream os;
      os << "log-transform product needs positive factor ranges, got " << F.range() << " and " << G.range();
      throw DomainError( os.str() );
    }
    return sr_compose( sr_add( sr_compose( F, UnaryFunc::log() ), sr_compose( G, UnaryFunc::log() ) ), UnaryFunc::exp() );
  }
  const double cF = F.range().mid(), rF = 0.5 * F.range().width();
  const double cG = G.range().mid(), rG = 0.5 * G.range().width();
  if( rF == 0. ) return sr_affine( G, cF, 0. );
  if( rG == 0. ) return sr_affine( F, cG, 0. );
  const SupRelax<S> Fs = sr_affine( F, 1. / rF, -cF / rF );
  const SupRelax<S> Gs = sr_affine( G, 1. / rG, -cG / rG );
  const SupRelax<S> P = sr_sub( sr_compose( sr_affine( sr_add( Fs, Gs ), 0.5, 0. ), UnaryFunc::sqr() ),
                                sr_compose( sr_affine( sr_sub( Fs, Gs ), 0.5, 0. ), UnaryFunc::sqr() ) );
  return sr_add( sr_add( sr_affine( P, rF * rG, -cF * cG ), sr_affine( F, cG, 0. ) ), sr_affine( G, cF, 0. ) );
}

//! @brief F/G as F * inv(G); 0 must lie outside the range of G
template <typename S>
SupRelax<S> sr_div( const SupRelax<S>& F, const SupRelax<S>& G, MulStrategy strategy = MulStrategy::dc )
{
  return sr_mul( F, sr_compose( G, UnaryFunc::inv() ), strategy );
}

namespace detail {

//! Summand-wise equality; max(F,F) through the relu identity would lose accuracy on inexact F
template <typename S>
bool identical( const SupRelax<S>& F, const SupRelax<S>& G )
{
  using T = SummandTraits<S>;
  if( !( F.box() == G.box() ) ) return false;
  for( std::size_t i = 0; i < F.size(); ++i )
    if( !T::equal( F.under()[i], G.under()[i] ) || !T::equal( F.over()[i], G.over()[i] ) ) return false;
  return true;
}

} // namespace detail

template <typename S>
SupRelax<S> sr_max( const SupRelax<S>& F, const SupRelax<S>& G )
{
  if( detail::identical( F, G ) ) return F;
  const SupRelax<S> D = sr_sub( F, G );
  return sr_affine( sr_add( sr_add( F, G ), sr_add( sr_relu( D ), sr_relu( sr_affine( D, -1., 0. ) ) ) ), 0.5, 0. );
}

template <typename S>
SupRelax<S> sr_min( const SupRelax<S>& F, const SupRelax<S>& G )
{
  if( detail::identical( F, G ) ) return F;
  const SupRelax<S> D = sr_sub( F, G );
  const UnaryFunc m0 = UnaryFunc::min_const( 0. );
  return sr_affine( sr_add( sr_add( F, G ), sr_add( sr_compose( D, m0 ), sr_compose( sr_affine( D, -1., 0. ), m0 ) ) ), 0.5, 0. );
}

template <typename S> SupRelax<S> operator+( const SupRelax<S>& F, const SupRelax<S>& G ) { return sr_add( F, G ); }
template <typename S> SupRelax<S> operator-( const SupRelax<S>& F, const SupRelax<S>& G ) { return sr_sub( F, G ); }
template <typename S> SupRelax<S> operator-( const SupRelax<S>& F ) { return sr_affine( F, -1., 0. ); }
template <typename S> SupRelax<S> operator*( const SupRelax<S>& F, const SupRelax<S>& G ) { return sr_mul( F, G ); }
template <typename S> SupRelax<S> operator*( double a, const SupRelax<S>& F ) { return sr_affine( F, a, 0. ); }
template <typename S> SupRelax<S> operator+( const SupRelax<S>& F, double b ) { return sr_affine( F, 1., b ); }

} // namespace suprelax
