#pragma once

#include "cfo/error.hpp"
#include "cfo/numerics/modulus.hpp"
#include "cfo/numerics/rational.hpp"
#include "cfo/structures/signature.hpp"

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cfo
{

using Point = std::size_t;
using Tuple = std::vector< Point >;

namespace detail
{

inline std::size_t int_pow( std::size_t base, std::size_t exp )
{
    std::size_t r = 1;
    for ( std::size_t i = 0; i < exp; ++i )
        r *= base;
    return r;
}

// Row-major index of a tuple over an n-element domain.
inline std::size_t tuple_index( std::span< const Point > t, std::size_t n )
{
    std::size_t idx = 0;
    for ( Point p : t )
        idx = idx * n + p;
    return idx;
}

inline Tuple tuple_at( std::size_t idx, std::size_t n, std::size_t arity )
{
    Tuple t( arity );
    for ( std::size_t i = arity; i-- > 0; ) {
        t[ i ] = idx % n;
        idx /= n;
    }
    return t;
}

inline std::string tuple_key( std::span< const Point > t )
{
    std::string s = "(";
    for ( std::size_t i = 0; i < t.size(); ++i ) {
        if ( i )
            s += ",";
        s += std::to_string( t[ i ] );
    }
    return s + ")";
}

} // namespace detail

/*
 * A finite metric structure. Points are 0..size()-1 with display labels.
 * Predicate and function tables are full and stored row-major in signature
 * order; constants are stored in signature order.
 */
class MetricStructure
{
    Signature _sig;
    std::vector< std::string > _labels;
    std::vector< Rational > _dist;
    std::vector< std::vector< Rational > > _pred;
    std::vector< std::vector< Point > > _func;
    std::vector< Point > _const;
    bool _pseudometric = false;

    void check_point( Point p ) const
    {
        if ( p >= size() )
            throw InvalidArgument( "point " + std::to_string( p ) + " outside domain of size " + std::to_string( size() ) );
    }

    void check_tuple( std::span< const Point > t, std::size_t arity, const std::string& sym ) const
    {
        if ( t.size() != arity )
            throw InvalidArgument( "symbol " + sym + " has arity " + std::to_string( arity ) + ", got " +
                                   std::to_string( t.size() ) + " arguments" );
        for ( Point p : t )
            check_point( p );
    }

    std::size_t pred_at( const std::string& name ) const
    {
        auto i = _sig.predicate_index( name );
        if ( !i )
            throw InvalidArgument( "unknown predicate '" + name + "'" );
        return *i;
    }
    std::size_t func_at( const std::string& name ) const
    {
        auto i = _sig.function_index( name );
        if ( !i )
            throw InvalidArgument( "unknown function '" + name + "'" );
        return *i;
    }
    std::size_t const_at( const std::string& name ) const
    {
        auto i = _sig.constant_index( name );
        if ( !i )
            throw InvalidArgument( "unknown constant '" + name + "'" );
        return *i;
    }

public:
    // n points labelled "0".."n-1", discrete metric (all distances 1),
    // predicates 0, functions and constants at point 0.
    MetricStructure( Signature sig, std::size_t n ) : _sig{ std::move( sig ) }
    {
        if ( n == 0 )
            throw InvalidArgument( "a structure needs at least one point" );
        for ( std::size_t i = 0; i < n; ++i )
            _labels.push_back( std::to_string( i ) );
        _dist.assign( n * n, Rational{ 1 } );
        for ( std::size_t i = 0; i < n; ++i )
            _dist[ i * n + i ] = 0;
        for ( const auto& p : _sig.predicates() )
            _pred.emplace_back( detail::int_pow( n, p.arity ), Rational{ 0 } );
        for ( const auto& f : _sig.functions() )
            _func.emplace_back( detail::int_pow( n, f.arity ), Point{ 0 } );
        _const.assign( _sig.constants().size(), 0 );
    }

    [[nodiscard]] const Signature& signature() const { return _sig; }
    [[nodiscard]] std::size_t size() const { return _labels.size(); }
    [[nodiscard]] const std::vector< std::string >& labels() const { return _labels; }
    [[nodiscard]] const std::string& label( Point p ) const { return _labels.at( p ); }
    [[nodiscard]] bool pseudometric() const { return _pseudometric; }

    [[nodiscard]] const Rational& dist( Point a, Point b ) const { return _dist[ a * size() + b ]; }

    [[nodiscard]] const Rational& predicate( std::size_t index, std::span< const Point > t ) const
    {
        return _pred[ index ][ detail::tuple_index( t, size() ) ];
    }
    [[nodiscard]] const Rational& predicate( const std::string& name, std::span< const Point > t ) const
    {
        auto i = pred_at( name );
        check_tuple( t, _sig.predicates()[ i ].arity, name );
        return predicate( i, t );
    }
    [[nodiscard]] const std::vector< Rational >& predicate_table( std::size_t index ) const { return _pred[ index ]; }

    [[nodiscard]] Point function( std::size_t index, std::span< const Point > t ) const
    {
        return _func[ index ][ detail::tuple_index( t, size() ) ];
    }
    [[nodiscard]] Point function( const std::string& name, std::span< const Point > t ) const
    {
        auto i = func_at( name );
        check_tuple( t, _sig.functions()[ i ].arity, name );
        return function( i, t );
    }
    [[nodiscard]] const std::vector< Point >& function_table( std::size_t index ) const { return _func[ index ]; }

    [[nodiscard]] Point constant( std::size_t index ) const { return _const[ index ]; }
    [[nodiscard]] Point constant( const std::string& name ) const { return _const[ const_at( name ) ]; }

    void set_label( Point p, std::string label )
    {
        check_point( p );
        _labels[ p ] = std::move( label );
    }

    // Sets d(a,b) and d(b,a).
    void set_distance( Point a, Point b, const Rational& v )
    {
        check_point( a );
        check_point( b );
        _dist[ a * size() + b ] = v;
        _dist[ b * size() + a ] = v;
    }

    // Sets d(a,b) only; for loading possibly asymmetric data to be validated.
    void set_distance_directed( Point a, Point b, const Rational& v )
    {
        check_point( a );
        check_point( b );
        _dist[ a * size() + b ] = v;
    }

    void set_predicate( const std::string& name, std::span< const Point > t, const Rational& v )
    {
        auto i = pred_at( name );
        check_tuple( t, _sig.predicates()[ i ].arity, name );
        _pred[ i ][ detail::tuple_index( t, size() ) ] = v;
    }
    void set_predicate( const std::string& name, std::initializer_list< Point > t, const Rational& v )
    {
        set_predicate( name, std::span< const Point >( t.begin(), t.size() ), v );
    }

    void set_function( const std::string& name, std::span< const Point > t, Point value )
    {
        auto i = func_at( name );
        check_tuple( t, _sig.functions()[ i ].arity, name );
        check_point( value );
        _func[ i ][ detail::tuple_index( t, size() ) ] = value;
    }
    void set_function( const std::string& name, std::initializer_list< Point > t, Point value )
    {
        set_function( name, std::span< const Point >( t.begin(), t.size() ), value );
    }

    void set_constant( const std::string& name, Point p )
    {
        check_point( p );
        _const[ const_at( name ) ] = p;
    }

    void set_pseudometric( bool allowed ) { _pseudometric = allowed; }

    friend bool operator==( const MetricStructure&, const MetricStructure& ) = default;
};

} // namespace cfo
