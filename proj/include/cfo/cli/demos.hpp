#pragma once

#include "cfo/formula/ast.hpp"
#include "cfo/game/solver.hpp"
#include "cfo/structures/structure.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace cfo
{

// inf x0 ... inf x(n-1). sup xn. min_i d(xn, xi); the y of the covering sentence is xn.
inline Formula covering_sentence( std::size_t n )
{
    if ( n == 0 )
        throw InvalidArgument( "the covering sentence needs n >= 1" );
    std::vector< Formula > dists;
    for ( std::size_t i = 0; i < n; ++i )
        dists.push_back( Formula::dist( Term::variable( n ), Term::variable( i ) ) );
    Formula body = n == 1 ? dists[ 0 ] : Formula::min( std::move( dists ) );
    Formula f = Formula::sup( n, std::move( body ) );
    for ( std::size_t i = n; i-- > 0; )
        f = Formula::inf( i, std::move( f ) );
    return f;
}

/*
 * Brute-force covering radius: min over multisets of n centers of the largest
 * distance from a point to its nearest center.
 */
inline Rational covering_radius( const MetricStructure& s, std::size_t n )
{
    if ( n == 0 )
        throw InvalidArgument( "the covering radius needs n >= 1" );
    const std::size_t size = s.size();
    std::vector< Point > centers( n, 0 );
    std::optional< Rational > best;
    for ( ;; ) {
        Rational radius{ 0 };
        for ( Point y = 0; y < size; ++y ) {
            Rational nearest = s.dist( y, centers[ 0 ] );
            for ( Point c : centers )
                nearest = std::min( nearest, s.dist( y, c ) );
            radius = std::max( radius, nearest );
        }
        if ( !best || radius < *best )
            best = radius;
        // Next non-decreasing center sequence.
        std::size_t i = n;
        while ( i > 0 && centers[ i - 1 ] + 1 == size )
            --i;
        if ( i == 0 )
            break;
        ++centers[ i - 1 ];
        for ( std::size_t j = i; j < n; ++j )
            centers[ j ] = centers[ i - 1 ];
    }
    return *best;
}

/*
 * II's memoryless strategy that answers a left move a with to_right[a] and a
 * right move b with to_left[b], for the given number of rounds.
 */
inline std::shared_ptr< const MoveTree > map_strategy( const std::vector< Point >& to_right,
                                                       const std::vector< Point >& to_left, std::size_t rounds )
{
    std::shared_ptr< const MoveTree > next;
    for ( std::size_t r = 0; r < rounds; ++r ) {
        auto t = std::make_shared< MoveTree >();
        for ( Point a = 0; a < to_right.size(); ++a )
            t->branches.push_back( { Side::Left, a, to_right[ a ], next } );
        for ( Point b = 0; b < to_left.size(); ++b )
            t->branches.push_back( { Side::Right, b, to_left[ b ], next } );
        next = t;
    }
    return next ? next : std::make_shared< const MoveTree >();
}

} // namespace cfo
