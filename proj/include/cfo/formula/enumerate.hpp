#pragma once

#include "cfo/error.hpp"
#include "cfo/formula/semantics.hpp"
#include "cfo/structures/structure.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace cfo
{

struct EnumerateOptions
{
    // Keep d(t, t), which is identically 0.
    bool reflexive = false;
    // Emit only one of d(t, u) and d(u, t).
    bool symmetric_dedup = true;
    // Throw ResourceError beyond this many atoms.
    std::size_t max_atoms = 1'000'000;
};

// Terms over x0..x{k-1} and the constants with function nesting at most term_depth.
inline std::vector< Term > enumerate_terms( const Signature& sig, std::size_t k, std::size_t term_depth,
                                            std::size_t max_terms = 1'000'000 )
{
    std::vector< Term > terms;
    std::set< Term > seen;
    auto add = [ & ]( Term t ) {
        if ( seen.insert( t ).second ) {
            terms.push_back( std::move( t ) );
            if ( terms.size() > max_terms )
                throw ResourceError( "term enumeration exceeds the cap", max_terms );
        }
    };
    for ( std::size_t i = 0; i < k; ++i )
        add( Term::variable( i ) );
    for ( const auto& c : sig.constants() )
        add( Term::constant( c ) );
    if ( sig.is_relational() )
        return terms;
    std::size_t level_begin = 0;
    for ( std::size_t depth = 1; depth <= term_depth; ++depth ) {
        // Every new term uses at least one argument from the previous level.
        std::size_t level_end = terms.size();
        std::vector< Term > snapshot( terms.begin(), terms.begin() + static_cast< std::ptrdiff_t >( level_end ) );
        for ( const auto& f : sig.functions() ) {
            std::size_t count = detail::int_pow( level_end, f.arity );
            for ( std::size_t idx = 0; idx < count; ++idx ) {
                auto tuple = detail::tuple_at( idx, level_end, f.arity );
                bool fresh = f.arity == 0 && depth == 1;
                for ( auto p : tuple )
                    fresh = fresh || p >= level_begin;
                if ( !fresh )
                    continue;
                std::vector< Term > args;
                for ( auto p : tuple )
                    args.push_back( snapshot[ p ] );
                add( Term::apply( f.name, std::move( args ) ) );
            }
        }
        level_begin = level_end;
    }
    return terms;
}

/*
 * All atomic formulas over x0..x{k-1} with term nesting at most term_depth,
 * without syntactic duplicates. Distance atoms come first, then predicates in
 * signature order. For relational signatures term_depth has no effect.
 */
inline std::vector< Formula > enumerate_atomic( const Signature& sig, std::size_t k, std::size_t term_depth = 0,
                                                const EnumerateOptions& opts = {} )
{
    auto terms = enumerate_terms( sig, k, term_depth, opts.max_atoms );
    std::vector< Formula > out;
    auto push = [ & ]( Formula f ) {
        out.push_back( std::move( f ) );
        if ( out.size() > opts.max_atoms )
            throw ResourceError( "atomic enumeration exceeds the cap", opts.max_atoms );
    };
    for ( std::size_t i = 0; i < terms.size(); ++i )
        for ( std::size_t j = opts.symmetric_dedup ? i : 0; j < terms.size(); ++j )
            if ( i != j || opts.reflexive )
                push( Formula::dist( terms[ i ], terms[ j ] ) );
    for ( const auto& p : sig.predicates() ) {
        std::size_t count = detail::int_pow( terms.size(), p.arity );
        for ( std::size_t idx = 0; idx < count; ++idx ) {
            std::vector< Term > args;
            for ( auto t : detail::tuple_at( idx, terms.size(), p.arity ) )
                args.push_back( terms[ t ] );
            push( Formula::pred( p.name, std::move( args ) ) );
        }
    }
    return out;
}

struct LogicalDistance
{
    Rational value{ 0 };
    // Structure and assignment attaining the value; empty when the corpus is.
    std::optional< std::size_t > structure;
    Assignment assignment;
};

/*
 * max over the corpus and over all assignments of the free variables of
 * |phi - psi|. It is a lower bound for the distance over all structures.
 */
inline LogicalDistance logical_distance_corpus( const Formula& phi, const Formula& psi,
                                                const std::vector< MetricStructure >& corpus )
{
    auto fv = free_variables( phi );
    if ( fv != free_variables( psi ) )
        throw InvalidArgument( "formulas have different free variables" );
    std::vector< std::size_t > vars( fv.begin(), fv.end() );
    std::size_t width = vars.empty() ? 0 : vars.back() + 1;
    LogicalDistance best;
    for ( std::size_t si = 0; si < corpus.size(); ++si ) {
        const auto& s = corpus[ si ];
        check_formula( phi, s.signature() );
        check_formula( psi, s.signature() );
        std::size_t count = detail::int_pow( s.size(), vars.size() );
        for ( std::size_t idx = 0; idx < count; ++idx ) {
            Assignment a( width, unassigned );
            auto tuple = detail::tuple_at( idx, s.size(), vars.size() );
            for ( std::size_t v = 0; v < vars.size(); ++v )
                a[ vars[ v ] ] = tuple[ v ];
            Rational diff = abs( evaluate( phi, s, a ) - evaluate( psi, s, a ) );
            if ( !best.structure || diff > best.value ) {
                best.value = diff;
                best.structure = si;
                best.assignment = a;
            }
        }
    }
    return best;
}

/*
 * Two-point discrete structures that separate every pair of distinct atoms of
 * a relational signature: each predicate constant 0 with the others 1 and the
 * reverse, all predicates 0 or all 1, and for each predicate argument position
 * a table that is 0 or Delta_P(1) according to that argument. Every table
 * setting is combined with every map of the constants into {0, 1}.
 */
inline std::vector< MetricStructure > separating_corpus( const Signature& sig, std::size_t max_structures = 4096 )
{
    if ( !sig.is_relational() )
        throw InvalidArgument( "separating corpus needs a relational signature" );
    const auto& preds = sig.predicates();
    using Table = std::function< Rational( std::size_t pred, const Tuple& ) >;
    std::vector< Table > settings;
    settings.push_back( []( std::size_t, const Tuple& ) { return Rational( 0 ); } );
    settings.push_back( []( std::size_t, const Tuple& ) { return Rational( 1 ); } );
    for ( std::size_t p = 0; p < preds.size(); ++p ) {
        settings.push_back( [ p ]( std::size_t q, const Tuple& ) { return Rational( q == p ? 0 : 1 ); } );
        settings.push_back( [ p ]( std::size_t q, const Tuple& ) { return Rational( q == p ? 1 : 0 ); } );
        Rational high = std::min( preds[ p ].modulus( 1 ), Rational( 1 ) );
        for ( std::size_t i = 0; i < preds[ p ].arity; ++i )
            settings.push_back( [ p, i, high ]( std::size_t q, const Tuple& t ) {
                return q == p && t[ i ] == 1 ? high : Rational( 0 );
            } );
    }
    std::size_t combos = detail::int_pow( 2, sig.constants().size() );
    if ( settings.size() * combos > max_structures )
        throw ResourceError( "separating corpus exceeds the cap", max_structures );
    std::vector< MetricStructure > out;
    for ( const auto& table : settings )
        for ( std::size_t c = 0; c < combos; ++c ) {
            MetricStructure s( sig, 2 );
            for ( std::size_t p = 0; p < preds.size(); ++p )
                for ( std::size_t idx = 0; idx < detail::int_pow( 2, preds[ p ].arity ); ++idx ) {
                    auto t = detail::tuple_at( idx, 2, preds[ p ].arity );
                    s.set_predicate( preds[ p ].name, t, table( p, t ) );
                }
            auto bits = detail::tuple_at( c, 2, sig.constants().size() );
            for ( std::size_t k = 0; k < bits.size(); ++k )
                s.set_constant( sig.constants()[ k ], bits[ k ] );
            out.push_back( std::move( s ) );
        }
    return out;
}

} // namespace cfo
