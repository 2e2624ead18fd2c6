#pragma once

#include "cfo/structures/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfo
{

// Same domain and metric, interpretations restricted to `sub`.
inline MetricStructure reduct( const MetricStructure& s, const Signature& sub )
{
    if ( !s.signature().includes( sub ) )
        throw InvalidArgument( "reduct target is not a subsignature" );
    MetricStructure out( sub, s.size() );
    out.set_pseudometric( s.pseudometric() );
    const std::size_t n = s.size();
    for ( Point p = 0; p < n; ++p ) {
        out.set_label( p, s.label( p ) );
        for ( Point q = 0; q < n; ++q )
            out.set_distance_directed( p, q, s.dist( p, q ) );
    }
    for ( const auto& spec : sub.predicates() ) {
        const auto& table = s.predicate_table( *s.signature().predicate_index( spec.name ) );
        for ( std::size_t i = 0; i < table.size(); ++i )
            out.set_predicate( spec.name, detail::tuple_at( i, n, spec.arity ), table[ i ] );
    }
    for ( const auto& spec : sub.functions() ) {
        const auto& table = s.function_table( *s.signature().function_index( spec.name ) );
        for ( std::size_t i = 0; i < table.size(); ++i )
            out.set_function( spec.name, detail::tuple_at( i, n, spec.arity ), table[ i ] );
    }
    for ( const auto& c : sub.constants() )
        out.set_constant( c, s.constant( c ) );
    return out;
}

inline MetricStructure reduct( const MetricStructure& s, const std::vector< std::string >& names )
{
    return reduct( s, s.signature().restrict_to( names ) );
}

namespace detail
{

// Copies metric, labels and the interpretations of every symbol `to` shares with `from`.
inline void copy_shared( const MetricStructure& from, MetricStructure& to )
{
    const std::size_t n = from.size();
    to.set_pseudometric( from.pseudometric() );
    for ( Point p = 0; p < n; ++p ) {
        to.set_label( p, from.label( p ) );
        for ( Point q = 0; q < n; ++q )
            to.set_distance_directed( p, q, from.dist( p, q ) );
    }
    const auto& fs = from.signature();
    for ( std::size_t i = 0; i < fs.predicates().size(); ++i )
        if ( to.signature().predicate_index( fs.predicates()[ i ].name ) ) {
            const auto& table = from.predicate_table( i );
            for ( std::size_t k = 0; k < table.size(); ++k )
                to.set_predicate( fs.predicates()[ i ].name, tuple_at( k, n, fs.predicates()[ i ].arity ), table[ k ] );
        }
    for ( std::size_t i = 0; i < fs.functions().size(); ++i )
        if ( to.signature().function_index( fs.functions()[ i ].name ) ) {
            const auto& table = from.function_table( i );
            for ( std::size_t k = 0; k < table.size(); ++k )
                to.set_function( fs.functions()[ i ].name, tuple_at( k, n, fs.functions()[ i ].arity ), table[ k ] );
        }
    for ( std::size_t i = 0; i < fs.constants().size(); ++i )
        if ( to.signature().constant_index( fs.constants()[ i ] ) )
            to.set_constant( fs.constants()[ i ], from.constant( i ) );
}

// Next unused c<k> names, continuing after the largest existing one.
inline std::vector< std::string > fresh_constant_names( const Signature& sig, std::size_t count )
{
    std::size_t next = 0;
    for ( const auto& name : sig.names() )
        if ( name.size() >= 2 && name[ 0 ] == 'c' &&
             std::all_of( name.begin() + 1, name.end(), []( unsigned char ch ) { return std::isdigit( ch ); } ) )
            next = std::max( next, static_cast< std::size_t >( std::stoull( name.substr( 1 ) ) ) + 1 );
    std::vector< std::string > out;
    for ( std::size_t i = 0; i < count; ++i )
        out.push_back( "c" + std::to_string( next + i ) );
    return out;
}

} // namespace detail

// Appends fresh constants c<k>, ..., interpreted as the given points in order.
inline MetricStructure expand_with_constants( const MetricStructure& s, const std::vector< Point >& points )
{
    for ( Point p : points )
        if ( p >= s.size() )
            throw InvalidArgument( "point " + std::to_string( p ) + " outside domain of size " + std::to_string( s.size() ) );
    auto names = detail::fresh_constant_names( s.signature(), points.size() );
    MetricStructure out( s.signature().with_constants( names ), s.size() );
    detail::copy_shared( s, out );
    for ( std::size_t i = 0; i < points.size(); ++i )
        out.set_constant( names[ i ], points[ i ] );
    return out;
}

// The isomorphic copy in which point p becomes perm[p].
inline MetricStructure relabeled_copy( const MetricStructure& s, const std::vector< Point >& perm )
{
    const std::size_t n = s.size();
    std::vector< bool > hit( n, false );
    if ( perm.size() != n )
        throw InvalidArgument( "permutation has the wrong length" );
    for ( Point p : perm ) {
        if ( p >= n || hit[ p ] )
            throw InvalidArgument( "not a permutation of the domain" );
        hit[ p ] = true;
    }
    MetricStructure out( s.signature(), n );
    out.set_pseudometric( s.pseudometric() );
    for ( Point a = 0; a < n; ++a ) {
        out.set_label( perm[ a ], s.label( a ) );
        for ( Point b = 0; b < n; ++b )
            out.set_distance_directed( perm[ a ], perm[ b ], s.dist( a, b ) );
    }
    const auto& sig = s.signature();
    auto mapped = [ & ]( Tuple t ) {
        for ( auto& p : t )
            p = perm[ p ];
        return t;
    };
    for ( std::size_t i = 0; i < sig.predicates().size(); ++i ) {
        const auto& table = s.predicate_table( i );
        for ( std::size_t k = 0; k < table.size(); ++k )
            out.set_predicate( sig.predicates()[ i ].name, mapped( detail::tuple_at( k, n, sig.predicates()[ i ].arity ) ),
                               table[ k ] );
    }
    for ( std::size_t i = 0; i < sig.functions().size(); ++i ) {
        const auto& table = s.function_table( i );
        for ( std::size_t k = 0; k < table.size(); ++k )
            out.set_function( sig.functions()[ i ].name, mapped( detail::tuple_at( k, n, sig.functions()[ i ].arity ) ),
                              perm[ table[ k ] ] );
    }
    for ( std::size_t i = 0; i < sig.constants().size(); ++i )
        out.set_constant( sig.constants()[ i ], perm[ s.constant( i ) ] );
    return out;
}

// Sound modulus for P_F(a_0..a_n) = d(a_n, F(a_0..a_{n-1})) in the max tuple metric.
inline PwlModulus relationalized_modulus( const PwlModulus& function_modulus )
{
    auto doubling = PwlModulus::capped_linear( 2 );
    return cap_at( modulus_max( compose( doubling, function_modulus ), doubling ) );
}

// Name used for the predicate replacing function F.
inline std::string relational_name( const Signature& sig, const std::string& function )
{
    std::string name = "P_" + function;
    while ( sig.contains_name( name ) )
        name += "_";
    return name;
}

/*
 * Replaces each n-ary function F by the (n+1)-ary predicate P_F with
 * P_F(a_0..a_n) = d(a_n, F(a_0..a_{n-1})). Predicates, constants and the
 * metric are kept.
 */
inline MetricStructure relationalize( const MetricStructure& s )
{
    const auto& sig = s.signature();
    auto preds = sig.predicates();
    std::vector< std::string > new_names;
    for ( const auto& f : sig.functions() ) {
        new_names.push_back( relational_name( sig, f.name ) );
        preds.push_back( { new_names.back(), f.arity + 1, relationalized_modulus( f.modulus ) } );
    }
    MetricStructure out( Signature( std::move( preds ), {}, sig.constants() ), s.size() );
    detail::copy_shared( s, out );
    const std::size_t n = s.size();
    for ( std::size_t fi = 0; fi < sig.functions().size(); ++fi ) {
        const auto& spec = sig.functions()[ fi ];
        const auto& table = s.function_table( fi );
        for ( std::size_t k = 0; k < table.size(); ++k ) {
            auto t = detail::tuple_at( k, n, spec.arity );
            t.push_back( 0 );
            for ( Point last = 0; last < n; ++last ) {
                t.back() = last;
                out.set_predicate( new_names[ fi ], t, s.dist( last, table[ k ] ) );
            }
        }
    }
    return out;
}

namespace detail
{

inline bool extend_isomorphism( const MetricStructure& a, const MetricStructure& b, std::vector< Point >& map,
                                std::vector< bool >& used, Point next )
{
    const std::size_t n = a.size();
    const auto& sig = a.signature();
    if ( next == n ) {
        for ( std::size_t i = 0; i < sig.predicates().size(); ++i ) {
            std::size_t arity = sig.predicates()[ i ].arity;
            for ( std::size_t k = 0; k < int_pow( n, arity ); ++k ) {
                auto t = tuple_at( k, n, arity );
                auto u = t;
                for ( auto& p : u )
                    p = map[ p ];
                if ( a.predicate( i, t ) != b.predicate( i, u ) )
                    return false;
            }
        }
        for ( std::size_t i = 0; i < sig.functions().size(); ++i ) {
            std::size_t arity = sig.functions()[ i ].arity;
            for ( std::size_t k = 0; k < int_pow( n, arity ); ++k ) {
                auto t = tuple_at( k, n, arity );
                auto u = t;
                for ( auto& p : u )
                    p = map[ p ];
                if ( map[ a.function( i, t ) ] != b.function( i, u ) )
                    return false;
            }
        }
        for ( std::size_t i = 0; i < sig.constants().size(); ++i )
            if ( map[ a.constant( i ) ] != b.constant( i ) )
                return false;
        return true;
    }
    for ( Point y = 0; y < n; ++y ) {
        if ( used[ y ] )
            continue;
        bool fits = true;
        for ( Point x = 0; x < next && fits; ++x )
            fits = a.dist( x, next ) == b.dist( map[ x ], y );
        if ( !fits )
            continue;
        map[ next ] = y;
        used[ y ] = true;
        if ( extend_isomorphism( a, b, map, used, next + 1 ) )
            return true;
        used[ y ] = false;
    }
    return false;
}

} // namespace detail

// A bijection p -> map[p] preserving the metric and every interpretation, by backtracking search.
inline std::optional< std::vector< Point > > find_isomorphism( const MetricStructure& a, const MetricStructure& b )
{
    if ( a.signature() != b.signature() || a.size() != b.size() )
        return std::nullopt;
    std::vector< Point > map( a.size(), 0 );
    std::vector< bool > used( a.size(), false );
    if ( detail::extend_isomorphism( a, b, map, used, 0 ) )
        return map;
    return std::nullopt;
}

} // namespace cfo
