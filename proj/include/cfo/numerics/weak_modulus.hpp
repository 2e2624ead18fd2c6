#pragma once

#include "cfo/error.hpp"
#include "cfo/numerics/modulus.hpp"
#include "cfo/numerics/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfo
{

// A value in [0, inf]; the infinite element absorbs under max and sum.
class ExtRational
{
    std::optional< Rational > _value;

public:
    ExtRational( Rational v ) : _value{ v } {} // NOLINT(implicit)
    static ExtRational infinity()
    {
        ExtRational e{ 0 };
        e._value.reset();
        return e;
    }

    [[nodiscard]] bool is_infinite() const { return !_value.has_value(); }
    [[nodiscard]] const Rational& value() const
    {
        if ( !_value )
            throw InvalidArgument( "value is infinite" );
        return *_value;
    }

    [[nodiscard]] std::string to_string() const { return _value ? _value->to_string() : "inf"; }

    friend bool operator==( const ExtRational&, const ExtRational& ) = default;
    friend bool operator<=( const ExtRational& a, const ExtRational& b )
    {
        if ( b.is_infinite() )
            return true;
        return !a.is_infinite() && *a._value <= *b._value;
    }
};

enum class Aggregator
{
    Max,
    Sum
};

// One coordinate of a k-ary or weak modulus: a unary modulus, or the rigid
// bound that is 0 at 0 and infinite elsewhere.
class CoordinateModulus
{
    std::optional< PwlModulus > _modulus;

public:
    CoordinateModulus( PwlModulus m ) : _modulus{ std::move( m ) } {} // NOLINT(implicit)
    static CoordinateModulus rigid()
    {
        CoordinateModulus c{ PwlModulus::zero() };
        c._modulus.reset();
        return c;
    }

    [[nodiscard]] bool is_rigid() const { return !_modulus.has_value(); }
    [[nodiscard]] const PwlModulus& modulus() const
    {
        if ( !_modulus )
            throw InvalidArgument( "rigid coordinate has no finite modulus" );
        return *_modulus;
    }

    [[nodiscard]] ExtRational operator()( const Rational& t ) const
    {
        if ( _modulus )
            return ( *_modulus )( t );
        if ( t.sign() < 0 )
            throw InvalidArgument( "modulus evaluated at negative input " + t.to_string() );
        return t.is_zero() ? ExtRational{ 0 } : ExtRational::infinity();
    }

    friend bool operator==( const CoordinateModulus&, const CoordinateModulus& ) = default;
};

inline ExtRational aggregate( Aggregator agg, const ExtRational& acc, const ExtRational& v )
{
    if ( acc.is_infinite() || v.is_infinite() )
        return ExtRational::infinity();
    return agg == Aggregator::Max ? std::max( acc.value(), v.value() ) : acc.value() + v.value();
}

// x |-> AGG_i coords[i](x_i)
class KaryModulus
{
    std::vector< CoordinateModulus > _coords;
    Aggregator _aggregator = Aggregator::Max;

public:
    KaryModulus() = default;
    KaryModulus( std::vector< CoordinateModulus > coords, Aggregator agg ) : _coords{ std::move( coords ) }, _aggregator{ agg } {}

    [[nodiscard]] std::size_t arity() const { return _coords.size(); }
    [[nodiscard]] const std::vector< CoordinateModulus >& coordinates() const { return _coords; }
    [[nodiscard]] Aggregator aggregator() const { return _aggregator; }

    [[nodiscard]] ExtRational operator()( std::span< const Rational > x ) const
    {
        if ( x.size() != _coords.size() )
            throw InvalidArgument( "k-ary modulus applied to " + std::to_string( x.size() ) + " arguments, arity " +
                                   std::to_string( _coords.size() ) );
        ExtRational acc{ 0 };
        for ( std::size_t i = 0; i < x.size(); ++i )
            acc = aggregate( _aggregator, acc, _coords[ i ]( x[ i ] ) );
        return acc;
    }
};

/*
 * Per-index rule for coordinates past the explicit list: coordinate i gets
 * base(c_i * t) with c_i = 1, i + 1 or 1 / (i + 1).
 */
struct TailRule
{
    enum class Scale
    {
        Constant,
        Index,
        InverseIndex
    };

    CoordinateModulus base{ PwlModulus::zero() };
    Scale scale = Scale::Constant;

    [[nodiscard]] CoordinateModulus at( std::size_t index ) const
    {
        if ( base.is_rigid() || scale == Scale::Constant )
            return base;
        Rational c = scale == Scale::Index ? Rational( static_cast< std::int64_t >( index ) + 1 )
                                           : Rational( 1, static_cast< std::int64_t >( index ) + 1 );
        return compose( base.modulus(), PwlModulus::linear( c ) );
    }

    friend bool operator==( const TailRule&, const TailRule& ) = default;
};

// An omega-ary modulus given by its coordinates and an aggregator.
class WeakModulus
{
    std::vector< CoordinateModulus > _coords;
    TailRule _tail;
    Aggregator _aggregator = Aggregator::Max;
    bool _allow_infinite = false;

    void check() const
    {
        if ( _allow_infinite )
            return;
        bool rigid = _tail.base.is_rigid();
        for ( const auto& c : _coords )
            rigid = rigid || c.is_rigid();
        if ( rigid )
            throw InvalidArgument( "weak modulus has an infinite coordinate but allow_infinite is false" );
    }

public:
    WeakModulus() = default;
    WeakModulus( std::vector< CoordinateModulus > coords, TailRule tail, Aggregator agg, bool allow_infinite = false )
        : _coords{ std::move( coords ) }, _tail{ std::move( tail ) }, _aggregator{ agg }, _allow_infinite{ allow_infinite }
    {
        check();
    }

    // Every coordinate i gets base(c_i t) per the tail rule.
    static WeakModulus uniform( PwlModulus base, Aggregator agg, TailRule::Scale scale = TailRule::Scale::Constant )
    {
        return WeakModulus( {}, TailRule{ std::move( base ), scale }, agg );
    }

    [[nodiscard]] CoordinateModulus coordinate( std::size_t i ) const
    {
        return i < _coords.size() ? _coords[ i ] : _tail.at( i );
    }

    [[nodiscard]] const std::vector< CoordinateModulus >& explicit_coordinates() const { return _coords; }
    [[nodiscard]] const TailRule& tail() const { return _tail; }
    [[nodiscard]] Aggregator aggregator() const { return _aggregator; }
    [[nodiscard]] bool allow_infinite() const { return _allow_infinite; }

    // The k-truncation Omega|_k(x_0..x_{k-1}) = Omega(x_0..x_{k-1}, 0, 0, ...).
    [[nodiscard]] KaryModulus truncate( std::size_t k ) const
    {
        std::vector< CoordinateModulus > coords;
        coords.reserve( k );
        for ( std::size_t i = 0; i < k; ++i )
            coords.push_back( coordinate( i ) );
        return KaryModulus( std::move( coords ), _aggregator );
    }

    friend bool operator==( const WeakModulus&, const WeakModulus& ) = default;
};

} // namespace cfo
