#pragma once

#include "cfo/error.hpp"
#include "cfo/game/position.hpp"
#include "cfo/game/solver.hpp"
#include "cfo/infinitary/leaf_family.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cfo
{

// A natural-number clock, or the omega fixpoint.
struct Clock
{
    std::optional< std::size_t > stage;

    static Clock finite( std::size_t alpha ) { return { alpha }; }
    static Clock omega() { return { std::nullopt }; }
    [[nodiscard]] bool is_omega() const { return !stage.has_value(); }
};

namespace detail
{

inline void check_pair_cap( const NamedPair& pair )
{
    if ( pair.left().size() * pair.right().size() > 65535 )
        throw InvalidArgument( "structures too large for position encoding" );
}

inline void append_position( std::string& k, const Position& p, std::size_t nb )
{
    for ( std::size_t i = 0; i < p.size(); ++i ) {
        auto code = static_cast< std::uint16_t >( p.left[ i ] * nb + p.right[ i ] );
        k.append( reinterpret_cast< const char* >( &code ), sizeof code );
    }
}

inline std::uint64_t pair_set( const Position& p, std::size_t nb )
{
    std::uint64_t bits = 0;
    for ( std::size_t i = 0; i < p.size(); ++i )
        bits |= std::uint64_t{ 1 } << ( p.left[ i ] * nb + p.right[ i ] );
    return bits;
}

} // namespace detail

struct RAlphaOptions
{
    std::size_t max_positions = default_max_positions;
    // Key the table on the set of played pairs; only honoured when the leaf allows it.
    bool set_abstraction = false;
};

/*
 * The recursion
 *   r_0(p) = leaf(p),
 *   r_{b+1}(p) = max( max_a min_b r_b(p(a,b)), max_b min_a r_b(p(a,b)) ),
 * memoized on (stage, position).
 */
class RAlphaSolver
{
    const NamedPair& _pair;
    LeafModel& _leaf;
    RAlphaOptions _opts;
    bool _sets;
    std::unordered_map< std::string, Rational > _table;

    [[nodiscard]] std::string key( std::size_t alpha, const Position& p ) const
    {
        std::string k( 1, static_cast< char >( alpha ) );
        if ( _sets ) {
            auto bits = detail::pair_set( p, _pair.right().size() );
            k.append( reinterpret_cast< const char* >( &bits ), sizeof bits );
        }
        else {
            detail::append_position( k, p, _pair.right().size() );
        }
        return k;
    }

    Rational r( std::size_t alpha, const Position& p, const Rational& leaf )
    {
        if ( alpha == 0 )
            return leaf;
        auto k = key( alpha, p );
        if ( auto it = _table.find( k ); it != _table.end() )
            return it->second;
        const std::size_t na = _pair.left().size(), nb = _pair.right().size();
        Rational sup_inf{ 0 }, inf_sup{ 0 };
        for ( Point a = 0; a < na; ++a ) {
            std::optional< Rational > inner;
            for ( Point b = 0; b < nb; ++b ) {
                Position q = p.extended( a, b );
                Rational v = r( alpha - 1, q, std::max( leaf, _leaf.delta( q ) ) );
                inner = inner ? std::min( *inner, v ) : v;
            }
            sup_inf = std::max( sup_inf, *inner );
        }
        for ( Point b = 0; b < nb; ++b ) {
            std::optional< Rational > inner;
            for ( Point a = 0; a < na; ++a ) {
                Position q = p.extended( a, b );
                Rational v = r( alpha - 1, q, std::max( leaf, _leaf.delta( q ) ) );
                inner = inner ? std::min( *inner, v ) : v;
            }
            inf_sup = std::max( inf_sup, *inner );
        }
        Rational v = std::max( sup_inf, inf_sup );
        if ( _table.size() >= _opts.max_positions )
            throw ResourceError( "r_alpha table exceeds the position cap", _opts.max_positions );
        _table.emplace( std::move( k ), v );
        return v;
    }

public:
    RAlphaSolver( const NamedPair& pair, LeafModel& leaf, RAlphaOptions opts = {} )
        : _pair{ pair }, _leaf{ leaf }, _opts{ opts },
          _sets{ opts.set_abstraction && leaf.set_invariant() && pair.left().size() * pair.right().size() <= 64 }
    {
        detail::check_pair_cap( pair );
    }

    Rational value( std::size_t alpha, const Position& p = {} )
    {
        check_position( _pair, p );
        _leaf.prepare( p.size() + alpha );
        return r( alpha, p, _leaf.value( p ) );
    }

    [[nodiscard]] std::size_t entries() const { return _table.size(); }
};

inline Rational r_alpha( const NamedPair& pair, const Position& p, std::size_t alpha, const LeafFamily& leaf = LeafFamily::atomic(),
                         const RAlphaOptions& opts = {} )
{
    auto model = leaf.make( pair );
    return RAlphaSolver( pair, *model, opts ).value( alpha, p );
}

struct DynamicMove
{
    Side side = Side::Left;
    Point point = 0;
    std::size_t clock = 0;
};

struct DynamicGameResult
{
    Rational value{ 0 };
    std::size_t clock = 0;
    // I's optimal opening; empty for clock 0.
    std::optional< DynamicMove > opening;
    std::size_t positions = 0;
};

/*
 * Explicit search of the dynamic game with a natural clock. On each move I
 * picks a side, a point and a new clock value below the current one; the play
 * stops once I picks 0. The leaf is the running max of the family over all
 * prefixes of the play, so II must stay within eps at every stage.
 */
class DynamicGameSolver
{
    const NamedPair& _pair;
    LeafModel& _leaf;
    std::size_t _max_positions;
    std::unordered_map< std::string, Rational > _memo;

    [[nodiscard]] std::size_t side_size( Side s ) const { return s == Side::Left ? _pair.left().size() : _pair.right().size(); }

    // Value of I moving `m` from p, with II answering; arrived = running max so far.
    Rational after_move( const Position& p, const Rational& arrived, const DynamicMove& m )
    {
        std::optional< Rational > best;
        for ( Point y = 0; y < side_size( other( m.side ) ); ++y ) {
            Position q = m.side == Side::Left ? p.extended( m.point, y ) : p.extended( y, m.point );
            Rational v = state( q, m.clock, std::max( arrived, _leaf.delta( q ) ) );
            if ( !best || v < *best )
                best = v;
        }
        return *best;
    }

    Rational state( const Position& p, std::size_t clock, const Rational& arrived )
    {
        if ( clock == 0 )
            return arrived;
        std::string k( 1, static_cast< char >( clock ) );
        detail::append_position( k, p, _pair.right().size() );
        if ( auto it = _memo.find( k ); it != _memo.end() )
            return it->second;
        Rational best{ 0 };
        for ( std::size_t next = 0; next < clock; ++next )
            for ( Side side : { Side::Left, Side::Right } )
                for ( Point x = 0; x < side_size( side ); ++x )
                    best = std::max( best, after_move( p, arrived, { side, x, next } ) );
        if ( _memo.size() >= _max_positions )
            throw ResourceError( "dynamic game memo exceeds the position cap", _max_positions );
        _memo.emplace( std::move( k ), best );
        return best;
    }

public:
    DynamicGameSolver( const NamedPair& pair, LeafModel& leaf, std::size_t max_positions = default_max_positions )
        : _pair{ pair }, _leaf{ leaf }, _max_positions{ max_positions }
    {
        detail::check_pair_cap( pair );
    }

    DynamicGameResult solve( std::size_t clock, const Position& start = {} )
    {
        check_position( _pair, start );
        _leaf.prepare( start.size() + clock );
        DynamicGameResult r;
        r.clock = clock;
        Rational arrived = _leaf.value( start );
        r.value = state( start, clock, arrived );
        if ( clock > 0 ) {
            for ( std::size_t next = 0; next < clock && !r.opening; ++next )
                for ( Side side : { Side::Left, Side::Right } ) {
                    for ( Point x = 0; x < side_size( side ) && !r.opening; ++x )
                        if ( after_move( start, arrived, { side, x, next } ) == r.value )
                            r.opening = DynamicMove{ side, x, next };
                    if ( r.opening )
                        break;
                }
        }
        r.positions = _memo.size();
        return r;
    }
};

inline DynamicGameResult dynamic_game_value( const NamedPair& pair, Clock clock, const LeafFamily& leaf = LeafFamily::atomic(),
                                             const Position& start = {}, std::size_t max_positions = default_max_positions )
{
    if ( clock.is_omega() )
        throw InvalidArgument( "the dynamic game solver needs a finite clock; use the omega solver for the omega game" );
    auto model = leaf.make( pair );
    return DynamicGameSolver( pair, *model, max_positions ).solve( *clock.stage, start );
}

struct OmegaGameResult
{
    Rational value{ 0 };
    // First k with v_k = v_{k+1} on every set of pairs.
    std::size_t stage = 0;
    std::size_t sets = 0;
    // Value at the start after each iteration, starting from the leaf.
    std::vector< Rational > history;
};

/*
 * The omega-length game on a relational signature. Positions are sets of
 * played pairs (bit i*|B|+j for the pair (i, j)). Starting from v_0 = leaf,
 *   v_{k+1}(S) = max( leaf(S), max_a min_b v_k(S+ab), max_b min_a v_k(S+ab) )
 * increases to its limit in finitely many steps; the limit at the start set
 * is the value.
 */
inline OmegaGameResult omega_game_value_atomic( const NamedPair& pair, const Position& start = {}, std::size_t term_depth = 0,
                                                std::size_t max_positions = default_max_positions )
{
    if ( !pair.signature().is_relational() )
        throw InvalidArgument( "the omega game solver needs a relational signature" );
    check_position( pair, start );
    const std::size_t na = pair.left().size(), nb = pair.right().size(), np = na * nb;
    if ( np > 62 || ( std::size_t{ 1 } << np ) > max_positions )
        throw ResourceError( "omega game over " + std::to_string( na ) + "x" + std::to_string( nb ) +
                                 " points needs 2^" + std::to_string( np ) + " sets, above the position cap",
                             max_positions );
    const std::size_t count = std::size_t{ 1 } << np;
    AtomicLeaf model( pair, term_depth );

    // leaf(S) = max(leaf(S minus its top pair), atoms through the top pair).
    std::vector< Rational > leaf( count );
    leaf[ 0 ] = model.base();
    Position tuple;
    for ( std::size_t s = 1; s < count; ++s ) {
        tuple.left.clear();
        tuple.right.clear();
        std::size_t top = 0;
        for ( std::size_t i = 0; i < np; ++i )
            if ( s >> i & 1 ) {
                tuple.left.push_back( i / nb );
                tuple.right.push_back( i % nb );
                top = i;
            }
        leaf[ s ] = std::max( leaf[ s & ~( std::size_t{ 1 } << top ) ], model.delta( tuple ) );
    }

    OmegaGameResult r;
    r.sets = count;
    std::size_t start_set = detail::pair_set( start, nb );
    std::vector< Rational > v = leaf, next( count );
    r.history.push_back( v[ start_set ] );
    for ( ;; ) {
        bool changed = false;
        for ( std::size_t s = 0; s < count; ++s ) {
            Rational best = leaf[ s ];
            for ( Point a = 0; a < na; ++a ) {
                std::optional< Rational > inner;
                for ( Point b = 0; b < nb; ++b ) {
                    const auto& w = v[ s | std::size_t{ 1 } << ( a * nb + b ) ];
                    if ( !inner || w < *inner )
                        inner = w;
                }
                best = std::max( best, *inner );
            }
            for ( Point b = 0; b < nb; ++b ) {
                std::optional< Rational > inner;
                for ( Point a = 0; a < na; ++a ) {
                    const auto& w = v[ s | std::size_t{ 1 } << ( a * nb + b ) ];
                    if ( !inner || w < *inner )
                        inner = w;
                }
                best = std::max( best, *inner );
            }
            changed = changed || best != v[ s ];
            next[ s ] = best;
        }
        if ( !changed )
            break;
        v.swap( next );
        ++r.stage;
        r.history.push_back( v[ start_set ] );
    }
    r.value = v[ start_set ];
    return r;
}

} // namespace cfo
