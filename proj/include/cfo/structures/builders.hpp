#pragma once

#include "cfo/structures/pair.hpp"
#include "cfo/structures/structure.hpp"
#include "cfo/structures/validate.hpp"

#include <vector>

namespace cfo
{

// n points, all distances 1.
inline MetricStructure discrete_space( std::size_t n, const Signature& sig = {} ) { return MetricStructure( sig, n ); }

// Points on [0, 1] at the given coordinates, d(a, b) = |x_a - x_b|.
inline MetricStructure line_space( const std::vector< Rational >& coords, const Signature& sig = {} )
{
    MetricStructure s( sig, coords.size() );
    for ( Point a = 0; a < coords.size(); ++a )
        for ( Point b = a + 1; b < coords.size(); ++b )
            s.set_distance( a, b, abs( coords[ a ] - coords[ b ] ) );
    return s;
}

// The pure metric space {0, 1} with d(0, 1) = 1.
inline MetricStructure two_point_discrete() { return discrete_space( 2 ); }

/*
 * A = {0, 1} with d = 1 against B = {0, 1, 2} with d(0,1) = d(0,2) = 1 and
 * d(1,2) = eps/2, over the empty signature.
 */
inline NamedPair cardinality_pair( const Rational& eps )
{
    if ( eps.sign() <= 0 || eps > 1 )
        throw InvalidArgument( "epsilon must lie in (0, 1]" );
    MetricStructure b = discrete_space( 3 );
    b.set_distance( 1, 2, eps / 2 );
    return NamedPair( two_point_discrete(), std::move( b ) );
}

/*
 * Truncations of the two spaces on {0, ..., m} where A has
 * d(0, n) = delta + 1/(n+1) and B has d(0, 1) = delta, d(0, n) = delta + 1/n
 * for n > 1; all other distinct pairs are at distance 1.
 */
inline NamedPair distance_pair( const Rational& delta, std::size_t m )
{
    if ( m == 0 )
        throw InvalidArgument( "truncation size must be >= 1" );
    MetricStructure a = discrete_space( m + 1 ), b = discrete_space( m + 1 );
    for ( std::size_t n = 1; n <= m; ++n ) {
        auto k = static_cast< std::int64_t >( n );
        a.set_distance( 0, n, delta + Rational( 1, k + 1 ) );
        b.set_distance( 0, n, n == 1 ? delta : delta + Rational( 1, k ) );
    }
    for ( const auto* s : { &a, &b } ) {
        auto rep = validate( *s );
        if ( !rep.ok() )
            throw InvalidArgument( "delta " + delta.to_string() + " does not give metric spaces: " + rep.to_string() );
    }
    return NamedPair( std::move( a ), std::move( b ) );
}

} // namespace cfo
