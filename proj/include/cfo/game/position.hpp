#pragma once

#include "cfo/error.hpp"
#include "cfo/formula/enumerate.hpp"
#include "cfo/formula/semantics.hpp"
#include "cfo/structures/pair.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace cfo
{

// Which structure a move is made in; II always answers in the other one.
enum class Side
{
    Left,
    Right
};

inline Side other( Side s ) { return s == Side::Left ? Side::Right : Side::Left; }
inline const char* side_name( Side s ) { return s == Side::Left ? "left" : "right"; }

// Points played so far, in play order: left[i] in the left structure is paired with right[i].
struct Position
{
    std::vector< Point > left;
    std::vector< Point > right;

    [[nodiscard]] std::size_t size() const { return left.size(); }

    [[nodiscard]] Position extended( Point a, Point b ) const
    {
        Position p = *this;
        p.left.push_back( a );
        p.right.push_back( b );
        return p;
    }

    friend bool operator==( const Position&, const Position& ) = default;
};

inline void check_position( const NamedPair& pair, const Position& p )
{
    if ( p.left.size() != p.right.size() )
        throw InvalidArgument( "position tuples have different lengths" );
    for ( auto a : p.left )
        if ( a >= pair.left().size() )
            throw InvalidArgument( "position point " + std::to_string( a ) + " is not in the left structure" );
    for ( auto b : p.right )
        if ( b >= pair.right().size() )
            throw InvalidArgument( "position point " + std::to_string( b ) + " is not in the right structure" );
}

/*
 * max over enumerate_atomic(sigma, k, term_depth) of |phi(a) - phi(b)| with k
 * the position length: the least eps for which the position is a partial
 * eps-isomorphism at that term depth.
 */
inline Rational atomic_discrepancy( const NamedPair& pair, const Position& p, std::size_t term_depth = 0 )
{
    check_position( pair, p );
    Rational worst{ 0 };
    for ( const auto& atom : enumerate_atomic( pair.signature(), p.size(), term_depth ) )
        worst = std::max( worst, abs( evaluate( atom, pair.left(), p.left ) - evaluate( atom, pair.right(), p.right ) ) );
    return worst;
}

// Whether every atomic Delta-formula differs by at most eps at the position.
inline bool is_partial_eps_delta_iso( const NamedPair& pair, const Position& p, const Rational& eps,
                                      const PwlModulus& delta, std::size_t term_depth = 0 )
{
    check_position( pair, p );
    const auto& sig = pair.signature();
    for ( const auto& atom : enumerate_atomic( sig, p.size(), term_depth ) ) {
        if ( !is_delta_formula( atom, delta, sig ) )
            continue;
        if ( abs( evaluate( atom, pair.left(), p.left ) - evaluate( atom, pair.right(), p.right ) ) > eps )
            return false;
    }
    return true;
}

/*
 * The leaf value of a play: a sup of formula discrepancies over a family that
 * grows with the position. delta(p) covers the formulas whose highest variable
 * is the last one played, so value(p) is the max of base() and delta over all
 * prefixes.
 */
class LeafModel
{
public:
    virtual ~LeafModel() = default;

    // Ensures delta can be asked for positions up to this length.
    virtual void prepare( std::size_t length ) = 0;
    [[nodiscard]] virtual Rational base() const = 0;
    [[nodiscard]] virtual Rational delta( const Position& p ) const = 0;
    // True when value(p) depends only on the set of pairs in p.
    [[nodiscard]] virtual bool set_invariant() const = 0;
    [[nodiscard]] virtual std::string describe() const = 0;

    [[nodiscard]] Rational value( const Position& p )
    {
        prepare( p.size() );
        Rational v = base();
        Position prefix;
        for ( std::size_t i = 0; i < p.size(); ++i ) {
            prefix = prefix.extended( p.left[ i ], p.right[ i ] );
            v = std::max( v, delta( prefix ) );
        }
        return v;
    }
};

/*
 * Atomic discrepancy as a leaf. Relational signatures are handled directly on
 * point tuples; otherwise the depth-bounded atoms are enumerated once and
 * grouped by their highest variable.
 */
class AtomicLeaf final : public LeafModel
{
    const NamedPair& _pair;
    std::size_t _term_depth;
    bool _direct;
    std::size_t _prepared = 0;
    Rational _base{ 0 };
    // _groups[k]: atoms whose highest variable is x{k}.
    std::vector< std::vector< Formula > > _groups;

    [[nodiscard]] Rational eval_diff( const Formula& f, const Position& p ) const
    {
        return abs( evaluate( f, _pair.left(), p.left ) - evaluate( f, _pair.right(), p.right ) );
    }

    // Pairs carried by the constants, then the played pairs.
    [[nodiscard]] std::vector< std::pair< Point, Point > > slots( const Position& p ) const
    {
        const auto& sig = _pair.signature();
        std::vector< std::pair< Point, Point > > out;
        for ( std::size_t c = 0; c < sig.constants().size(); ++c )
            out.emplace_back( _pair.left().constant( c ), _pair.right().constant( c ) );
        for ( std::size_t i = 0; i < p.size(); ++i )
            out.emplace_back( p.left[ i ], p.right[ i ] );
        return out;
    }

    // max over atoms built from slots, restricted to those using slot `fresh` when given.
    [[nodiscard]] Rational direct( const std::vector< std::pair< Point, Point > >& s, std::optional< std::size_t > fresh ) const
    {
        const auto& A = _pair.left();
        const auto& B = _pair.right();
        Rational worst{ 0 };
        for ( std::size_t i = 0; i < s.size(); ++i )
            for ( std::size_t j = i + 1; j < s.size(); ++j )
                if ( !fresh || i == *fresh || j == *fresh )
                    worst = std::max( worst, abs( A.dist( s[ i ].first, s[ j ].first ) - B.dist( s[ i ].second, s[ j ].second ) ) );
        const auto& preds = _pair.signature().predicates();
        Tuple ta, tb;
        for ( std::size_t pi = 0; pi < preds.size(); ++pi ) {
            std::size_t arity = preds[ pi ].arity;
            std::size_t count = detail::int_pow( s.size(), arity );
            ta.resize( arity );
            tb.resize( arity );
            for ( std::size_t idx = 0; idx < count; ++idx ) {
                std::size_t rest = idx;
                bool uses = !fresh;
                for ( std::size_t k = arity; k-- > 0; ) {
                    std::size_t slot = rest % s.size();
                    rest /= s.size();
                    uses = uses || slot == *fresh;
                    ta[ k ] = s[ slot ].first;
                    tb[ k ] = s[ slot ].second;
                }
                if ( uses )
                    worst = std::max( worst, abs( A.predicate( pi, ta ) - B.predicate( pi, tb ) ) );
            }
        }
        return worst;
    }

public:
    AtomicLeaf( const NamedPair& pair, std::size_t term_depth = 0, bool force_enumeration = false )
        : _pair{ pair }, _term_depth{ term_depth }, _direct{ pair.signature().is_relational() && !force_enumeration }
    {
        if ( _direct ) {
            _base = direct( slots( {} ), std::nullopt );
        }
        else {
            for ( const auto& atom : enumerate_atomic( pair.signature(), 0, term_depth ) )
                _base = std::max( _base, eval_diff( atom, {} ) );
        }
    }

    void prepare( std::size_t length ) override
    {
        if ( _direct || length <= _prepared )
            return;
        _groups.assign( length, {} );
        for ( auto& atom : enumerate_atomic( _pair.signature(), length, _term_depth ) ) {
            auto fv = free_variables( atom );
            if ( !fv.empty() )
                _groups[ *fv.rbegin() ].push_back( std::move( atom ) );
        }
        _prepared = length;
    }

    [[nodiscard]] Rational base() const override { return _base; }

    [[nodiscard]] Rational delta( const Position& p ) const override
    {
        if ( p.size() == 0 )
            return 0;
        if ( _direct ) {
            auto s = slots( p );
            return direct( s, s.size() - 1 );
        }
        if ( p.size() > _prepared )
            throw InvalidArgument( "leaf model not prepared for position length " + std::to_string( p.size() ) );
        Rational worst{ 0 };
        for ( const auto& atom : _groups[ p.size() - 1 ] )
            worst = std::max( worst, eval_diff( atom, p ) );
        return worst;
    }

    [[nodiscard]] bool set_invariant() const override { return _pair.signature().is_relational(); }

    [[nodiscard]] std::string describe() const override
    {
        if ( _pair.signature().is_relational() )
            return "atomic";
        return "atomic (term depth " + std::to_string( _term_depth ) + ")";
    }
};

} // namespace cfo
