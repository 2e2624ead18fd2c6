#pragma once

#include "cfo/structures/operations.hpp"
#include "cfo/structures/pair.hpp"
#include "cfo/structures/structure.hpp"

#include <numeric>
#include <random>

namespace cfo
{

/*
 * Random small structures that are valid by construction. Line metrics put
 * points at distinct multiples of 1/8 in [0, 1]; "far" metrics draw every
 * distance from {4/8, ..., 8/8}, which satisfies the triangle inequality
 * automatically. Predicate values lie on the grid k/4 and each predicate gets
 * modulus min(L t, 1) with L the reciprocal of the least possible distance,
 * so every table obeys its modulus.
 */
struct RandomOptions
{
    enum class Metric
    {
        Line,
        Far,
        Either
    };

    std::size_t min_points = 1;
    std::size_t max_points = 4;
    std::size_t max_predicates = 2;
    std::size_t max_arity = 2;
    std::size_t max_constants = 0;
    Metric metric = Metric::Either;
    // Chance (out of 8) that the right side of a pair is a relabelled copy.
    unsigned isomorphic_eighths = 2;
};

namespace detail
{

inline std::size_t below( std::mt19937_64& rng, std::size_t bound ) { return bound == 0 ? 0 : rng() % bound; }

inline std::size_t between( std::mt19937_64& rng, std::size_t lo, std::size_t hi ) { return lo + below( rng, hi - lo + 1 ); }

} // namespace detail

inline Rational random_modulus_slope( RandomOptions::Metric metric ) { return metric == RandomOptions::Metric::Far ? 2 : 8; }

inline Signature random_signature( std::mt19937_64& rng, const RandomOptions& opts )
{
    auto slope = random_modulus_slope( opts.metric );
    std::vector< SymbolSpec > preds;
    std::size_t k = detail::between( rng, 0, opts.max_predicates );
    for ( std::size_t i = 0; i < k; ++i )
        preds.push_back( { "P" + std::to_string( i ), detail::between( rng, 1, opts.max_arity ), PwlModulus::capped_linear( slope ) } );
    std::vector< std::string > consts;
    std::size_t c = detail::between( rng, 0, opts.max_constants );
    for ( std::size_t i = 0; i < c; ++i )
        consts.push_back( "k" + std::to_string( i ) );
    return Signature( std::move( preds ), {}, std::move( consts ) );
}

inline MetricStructure random_structure( const Signature& sig, std::size_t n, std::mt19937_64& rng, RandomOptions::Metric metric )
{
    if ( metric == RandomOptions::Metric::Either )
        metric = detail::below( rng, 2 ) ? RandomOptions::Metric::Line : RandomOptions::Metric::Far;
    MetricStructure s( sig, n );
    if ( metric == RandomOptions::Metric::Line ) {
        if ( n > 9 )
            throw InvalidArgument( "line metric on the 1/8 grid holds at most 9 points" );
        std::vector< std::int64_t > grid( 9 );
        std::iota( grid.begin(), grid.end(), 0 );
        for ( std::size_t i = 0; i < n; ++i )
            std::swap( grid[ i ], grid[ i + detail::below( rng, 9 - i ) ] );
        for ( Point a = 0; a < n; ++a )
            for ( Point b = a + 1; b < n; ++b )
                s.set_distance( a, b, Rational( std::abs( grid[ a ] - grid[ b ] ), 8 ) );
    }
    else {
        for ( Point a = 0; a < n; ++a )
            for ( Point b = a + 1; b < n; ++b )
                s.set_distance( a, b, Rational( static_cast< std::int64_t >( detail::between( rng, 4, 8 ) ), 8 ) );
    }
    for ( const auto& p : sig.predicates() ) {
        std::size_t count = detail::int_pow( n, p.arity );
        for ( std::size_t k = 0; k < count; ++k )
            s.set_predicate( p.name, detail::tuple_at( k, n, p.arity ),
                             Rational( static_cast< std::int64_t >( detail::between( rng, 0, 4 ) ), 4 ) );
    }
    for ( const auto& c : sig.constants() )
        s.set_constant( c, detail::below( rng, n ) );
    return s;
}

inline std::vector< Point > random_permutation( std::size_t n, std::mt19937_64& rng )
{
    std::vector< Point > perm( n );
    std::iota( perm.begin(), perm.end(), 0 );
    for ( std::size_t i = n; i > 1; --i )
        std::swap( perm[ i - 1 ], perm[ detail::below( rng, i ) ] );
    return perm;
}

inline NamedPair random_pair( std::mt19937_64& rng, const RandomOptions& opts = {} )
{
    auto metric = opts.metric;
    if ( metric == RandomOptions::Metric::Either )
        metric = detail::below( rng, 2 ) ? RandomOptions::Metric::Line : RandomOptions::Metric::Far;
    auto local = opts;
    local.metric = metric;
    Signature sig = random_signature( rng, local );
    auto left = random_structure( sig, detail::between( rng, opts.min_points, opts.max_points ), rng, metric );
    if ( detail::below( rng, 8 ) < opts.isomorphic_eighths )
        return NamedPair( left, relabeled_copy( left, random_permutation( left.size(), rng ) ) );
    auto right = random_structure( sig, detail::between( rng, opts.min_points, opts.max_points ), rng, metric );
    return NamedPair( std::move( left ), std::move( right ) );
}

} // namespace cfo
