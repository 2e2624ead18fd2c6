#pragma once

#include "cfo/error.hpp"
#include "cfo/structures/pair.hpp"
#include "cfo/structures/structure.hpp"

#include <string>
#include <vector>

namespace cfo
{

// Signature {P_0, ..., P_{m-1}} of unary predicates with Delta_{P_i}(t) = t/(i+1).
inline Signature section6_signature( std::size_t m )
{
    std::vector< SymbolSpec > preds;
    for ( std::size_t i = 0; i < m; ++i )
        preds.push_back( { "P" + std::to_string( i ), 1, PwlModulus::linear( Rational( 1, static_cast< std::int64_t >( i + 1 ) ) ) } );
    return Signature( std::move( preds ), {}, {} );
}

/*
 * Finite truncation with discrete metric. Points come in levels j = 0..m-1 of
 * level_size points each, plus a distinguished point c. A level-j point lies
 * in A_i iff i < j, so |A_i \ A_{i+1}| = level_size for i < m-1. On the left c
 * lies in every A_i; on the right c is missing from A_{m-1}, which is then
 * empty. P_i(t) = d(t, A_i)/(i+1) with d(t, empty set) = 1.
 */
inline NamedPair build_section6_counterexample( std::size_t m, std::size_t level_size )
{
    if ( m == 0 || level_size == 0 )
        throw InvalidArgument( "level counterexample needs m >= 1 and level_size >= 1" );
    auto sig = section6_signature( m );
    const std::size_t n = m * level_size + 1;
    const Point c = n - 1;
    auto side = [ & ]( bool left ) {
        MetricStructure s( sig, n );
        for ( std::size_t j = 0; j < m; ++j )
            for ( std::size_t k = 0; k < level_size; ++k )
                s.set_label( j * level_size + k, "L" + std::to_string( j ) + "." + std::to_string( k ) );
        s.set_label( c, "c" );
        for ( std::size_t i = 0; i < m; ++i ) {
            Rational far( 1, static_cast< std::int64_t >( i + 1 ) );
            for ( Point t = 0; t < n; ++t ) {
                bool in = t == c ? ( left || i + 1 < m ) : i < t / level_size;
                s.set_predicate( sig.predicates()[ i ].name, { t }, in ? Rational( 0 ) : far );
            }
        }
        return s;
    };
    return NamedPair( side( true ), side( false ) );
}

} // namespace cfo
