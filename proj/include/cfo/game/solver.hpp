#pragma once

#include "cfo/error.hpp"
#include "cfo/game/position.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cfo
{

inline constexpr std::size_t default_max_positions = 2'000'000;

struct GameOptions
{
    // Cap on memoized positions and on certificate tree nodes.
    std::size_t max_positions = default_max_positions;
    // Memoize on the set of played pairs; only honoured when the leaf allows it.
    bool set_abstraction = true;
    bool memoize = true;
    bool certificates = true;
};

// II's strategy: an answer and a continuation for every move of I.
struct MoveTree
{
    struct Branch
    {
        Side side;
        Point move;
        Point reply;
        std::shared_ptr< const MoveTree > next;
    };
    std::vector< Branch > branches;

    [[nodiscard]] const Branch* find( Side side, Point move ) const
    {
        for ( const auto& b : branches )
            if ( b.side == side && b.move == move )
                return &b;
        return nullptr;
    }
};

// I's strategy: one move, then a continuation for every answer of II.
struct SpoilerTree
{
    Side side = Side::Left;
    Point move = 0;
    std::vector< std::pair< Point, std::shared_ptr< const SpoilerTree > > > replies;

    [[nodiscard]] const SpoilerTree* after( Point reply ) const
    {
        for ( const auto& [ r, t ] : replies )
            if ( r == reply )
                return t.get();
        return nullptr;
    }
};

struct GameValueResult
{
    Rational value{ 0 };
    std::shared_ptr< const MoveTree > ii_strategy;
    // Empty when no round is left to play.
    std::shared_ptr< const SpoilerTree > i_witness;
    std::size_t rounds = 0;
    std::size_t term_depth = 0;
    bool set_abstraction = false;
    std::size_t positions = 0;
    std::string leaf;
};

/*
 * Exact minimax for the n-round game:
 *   V_0(p) = leaf(p),
 *   V_{r+1}(p) = max( max_a min_b V_r(p(a,b)), max_b min_a V_r(p(a,b)) ).
 * I's moves are scanned in the right structure first, then the left, and the
 * first strict improvement is kept; II picks the lowest-index optimal answer.
 */
class GameSolver
{
    const NamedPair& _pair;
    LeafModel& _leaf;
    GameOptions _opts;
    bool _sets;
    std::unordered_map< std::string, Rational > _memo;
    std::size_t _tree_nodes = 0;

    [[nodiscard]] std::string key( const Position& p, std::size_t rounds ) const
    {
        std::size_t nb = _pair.right().size();
        std::string k;
        if ( _sets ) {
            std::uint64_t bits = 0;
            for ( std::size_t i = 0; i < p.size(); ++i )
                bits |= std::uint64_t{ 1 } << ( p.left[ i ] * nb + p.right[ i ] );
            k.assign( reinterpret_cast< const char* >( &bits ), sizeof bits );
        }
        else {
            for ( std::size_t i = 0; i < p.size(); ++i ) {
                auto code = static_cast< std::uint32_t >( p.left[ i ] * nb + p.right[ i ] );
                k.append( reinterpret_cast< const char* >( &code ), sizeof code );
            }
        }
        k.push_back( static_cast< char >( rounds ) );
        return k;
    }

    [[nodiscard]] std::size_t side_size( Side s ) const { return s == Side::Left ? _pair.left().size() : _pair.right().size(); }

    [[nodiscard]] static Position play( const Position& p, Side side, Point move, Point reply )
    {
        return side == Side::Left ? p.extended( move, reply ) : p.extended( reply, move );
    }

    Rational solve( const Position& p, std::size_t rounds, const Rational& leaf )
    {
        if ( rounds == 0 )
            return leaf;
        std::string k;
        if ( _opts.memoize ) {
            k = key( p, rounds );
            if ( auto it = _memo.find( k ); it != _memo.end() )
                return it->second;
        }
        Rational best{ 0 };
        for ( Side side : { Side::Right, Side::Left } )
            for ( Point x = 0; x < side_size( side ); ++x ) {
                Rational answer = reply_value( p, rounds, leaf, side, x, nullptr );
                best = std::max( best, answer );
            }
        if ( _opts.memoize ) {
            if ( _memo.size() >= _opts.max_positions )
                throw ResourceError( "game memo table exceeds the position cap", _opts.max_positions );
            _memo.emplace( std::move( k ), best );
        }
        return best;
    }

    // II's best answer value to I playing x on `side`; the answer itself goes to *reply.
    Rational reply_value( const Position& p, std::size_t rounds, const Rational& leaf, Side side, Point x, Point* reply )
    {
        std::optional< Rational > best;
        for ( Point y = 0; y < side_size( other( side ) ); ++y ) {
            Position q = play( p, side, x, y );
            Rational v = solve( q, rounds - 1, std::max( leaf, _leaf.delta( q ) ) );
            if ( !best || v < *best ) {
                best = v;
                if ( reply )
                    *reply = y;
            }
        }
        return *best;
    }

    void count_node()
    {
        if ( ++_tree_nodes > _opts.max_positions )
            throw ResourceError( "strategy certificate exceeds the position cap", _opts.max_positions );
    }

    std::shared_ptr< const MoveTree > build_ii( const Position& p, std::size_t rounds, const Rational& leaf )
    {
        auto tree = std::make_shared< MoveTree >();
        if ( rounds == 0 )
            return tree;
        for ( Side side : { Side::Right, Side::Left } )
            for ( Point x = 0; x < side_size( side ); ++x ) {
                count_node();
                Point y = 0;
                reply_value( p, rounds, leaf, side, x, &y );
                Position q = play( p, side, x, y );
                tree->branches.push_back( { side, x, y, build_ii( q, rounds - 1, std::max( leaf, _leaf.delta( q ) ) ) } );
            }
        return tree;
    }

    std::shared_ptr< const SpoilerTree > build_i( const Position& p, std::size_t rounds, const Rational& leaf )
    {
        if ( rounds == 0 )
            return nullptr;
        auto [ side, x ] = best_move( p, rounds );
        auto tree = std::make_shared< SpoilerTree >();
        tree->side = side;
        tree->move = x;
        for ( Point y = 0; y < side_size( other( side ) ); ++y ) {
            count_node();
            Position q = play( p, side, x, y );
            tree->replies.emplace_back( y, build_i( q, rounds - 1, std::max( leaf, _leaf.delta( q ) ) ) );
        }
        return tree;
    }

public:
    GameSolver( const NamedPair& pair, LeafModel& leaf, GameOptions opts = {} )
        : _pair{ pair }, _leaf{ leaf }, _opts{ opts },
          _sets{ opts.set_abstraction && leaf.set_invariant() && pair.left().size() * pair.right().size() <= 64 }
    {
    }

    [[nodiscard]] bool uses_set_abstraction() const { return _sets; }
    [[nodiscard]] std::size_t positions() const { return _memo.size(); }

    // V_rounds at p.
    Rational value( const Position& p, std::size_t rounds )
    {
        check_position( _pair, p );
        _leaf.prepare( p.size() + rounds );
        return solve( p, rounds, _leaf.value( p ) );
    }

    // I's optimal move at p with `rounds` left (rounds >= 1).
    std::pair< Side, Point > best_move( const Position& p, std::size_t rounds )
    {
        if ( rounds == 0 )
            throw InvalidArgument( "no rounds left to move in" );
        _leaf.prepare( p.size() + rounds );
        Rational leaf = _leaf.value( p );
        std::optional< Rational > best;
        std::pair< Side, Point > move{ Side::Right, 0 };
        for ( Side side : { Side::Right, Side::Left } )
            for ( Point x = 0; x < side_size( side ); ++x ) {
                Rational v = reply_value( p, rounds, leaf, side, x, nullptr );
                if ( !best || v > *best ) {
                    best = v;
                    move = { side, x };
                }
            }
        return move;
    }

    // II's optimal answer when I plays x on `side` at p with `rounds` left.
    Point best_reply( const Position& p, std::size_t rounds, Side side, Point x )
    {
        if ( rounds == 0 )
            throw InvalidArgument( "no rounds left to move in" );
        if ( x >= side_size( side ) )
            throw InvalidArgument( "move is not a point of the " + std::string( side_name( side ) ) + " structure" );
        _leaf.prepare( p.size() + rounds );
        Point y = 0;
        reply_value( p, rounds, _leaf.value( p ), side, x, &y );
        return y;
    }

    GameValueResult solve_game( const Position& start, std::size_t rounds )
    {
        GameValueResult r;
        r.value = value( start, rounds );
        r.rounds = rounds;
        r.set_abstraction = _sets;
        r.leaf = _leaf.describe();
        if ( _opts.certificates ) {
            Rational leaf = _leaf.value( start );
            _tree_nodes = 0;
            r.ii_strategy = build_ii( start, rounds, leaf );
            _tree_nodes = 0;
            r.i_witness = build_i( start, rounds, leaf );
        }
        r.positions = _memo.size();
        return r;
    }
};

inline GameValueResult game_value( const NamedPair& pair, const Position& start, std::size_t rounds,
                                   std::size_t term_depth = 0, const GameOptions& opts = {} )
{
    AtomicLeaf leaf( pair, term_depth );
    GameSolver solver( pair, leaf, opts );
    auto r = solver.solve_game( start, rounds );
    r.term_depth = term_depth;
    return r;
}

inline GameValueResult game_value( const NamedPair& pair, std::size_t rounds, std::size_t term_depth = 0,
                                   const GameOptions& opts = {} )
{
    return game_value( pair, Position{}, rounds, term_depth, opts );
}

struct WinningStrategy
{
    bool ii_wins = false;
    Rational value{ 0 };
    // Set when II wins.
    std::shared_ptr< const MoveTree > ii_strategy;
    // Set when I wins.
    std::shared_ptr< const SpoilerTree > i_witness;
};

// II wins the eps-game exactly when the value is at most eps.
inline WinningStrategy winning_strategy( const NamedPair& pair, std::size_t rounds, const Rational& eps,
                                         std::size_t term_depth = 0, const GameOptions& opts = {} )
{
    if ( eps.sign() <= 0 )
        throw InvalidArgument( "epsilon must be > 0" );
    auto r = game_value( pair, rounds, term_depth, opts );
    WinningStrategy w;
    w.value = r.value;
    w.ii_wins = r.value <= eps;
    if ( w.ii_wins )
        w.ii_strategy = r.ii_strategy;
    else
        w.i_witness = r.i_witness;
    return w;
}

// ------------------------------------------------------------------ replay

struct Play
{
    std::vector< Side > sides;
    Position position;
    Rational leaf{ 0 };
};

namespace detail
{

inline void replay_ii( const NamedPair& pair, LeafModel& leaf, const Position& p, const MoveTree* tree, std::size_t rounds,
                       std::vector< Side >& sides, std::optional< Play >& worst )
{
    if ( rounds == 0 ) {
        Rational v = leaf.value( p );
        if ( !worst || v > worst->leaf )
            worst = Play{ sides, p, v };
        return;
    }
    for ( Side side : { Side::Right, Side::Left } ) {
        std::size_t n = side == Side::Left ? pair.left().size() : pair.right().size();
        for ( Point x = 0; x < n; ++x ) {
            const auto* b = tree ? tree->find( side, x ) : nullptr;
            if ( !b )
                throw InvalidArgument( "strategy has no answer to a " + std::string( side_name( side ) ) + " move at point " +
                                       std::to_string( x ) );
            sides.push_back( side );
            replay_ii( pair, leaf, side == Side::Left ? p.extended( x, b->reply ) : p.extended( b->reply, x ), b->next.get(),
                       rounds - 1, sides, worst );
            sides.pop_back();
        }
    }
}

inline void replay_i( const NamedPair& pair, LeafModel& leaf, const Position& p, const SpoilerTree* tree, std::size_t rounds,
                      std::vector< Side >& sides, std::optional< Play >& best )
{
    if ( rounds == 0 ) {
        Rational v = leaf.value( p );
        if ( !best || v < best->leaf )
            best = Play{ sides, p, v };
        return;
    }
    if ( !tree )
        throw InvalidArgument( "spoiler witness ends before the last round" );
    std::size_t n = tree->side == Side::Left ? pair.right().size() : pair.left().size();
    for ( Point y = 0; y < n; ++y ) {
        if ( !tree->after( y ) && rounds > 1 )
            throw InvalidArgument( "spoiler witness has no continuation after answer " + std::to_string( y ) );
        sides.push_back( tree->side );
        replay_i( pair, leaf, tree->side == Side::Left ? p.extended( tree->move, y ) : p.extended( y, tree->move ),
                  tree->after( y ), rounds - 1, sides, best );
        sides.pop_back();
    }
}

} // namespace detail

// The play with the largest final leaf when II follows the tree against every I play.
inline Play replay_ii_strategy( const NamedPair& pair, LeafModel& leaf, const Position& start, const MoveTree& tree,
                                std::size_t rounds )
{
    leaf.prepare( start.size() + rounds );
    std::vector< Side > sides;
    std::optional< Play > worst;
    detail::replay_ii( pair, leaf, start, &tree, rounds, sides, worst );
    return *worst;
}

// The play with the smallest final leaf when I follows the witness against every II answer.
inline Play replay_i_witness( const NamedPair& pair, LeafModel& leaf, const Position& start, const SpoilerTree* witness,
                              std::size_t rounds )
{
    leaf.prepare( start.size() + rounds );
    std::vector< Side > sides;
    std::optional< Play > best;
    detail::replay_i( pair, leaf, start, witness, rounds, sides, best );
    return *best;
}

} // namespace cfo
