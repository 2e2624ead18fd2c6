#pragma once

#include "cfo/error.hpp"
#include "cfo/formula/enumerate.hpp"
#include "cfo/formula/semantics.hpp"
#include "cfo/game/position.hpp"
#include "cfo/numerics/weak_modulus.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cfo
{

// A connective applied to atomic formulas; a bare atom counts, with the identity as connective.
inline bool is_basic_formula( const Formula& f )
{
    if ( f.is_atomic() )
        return true;
    if ( f.kind != Formula::Kind::Conn )
        return false;
    for ( const auto& c : f.children )
        if ( !c.is_atomic() )
            return false;
    return true;
}

/*
 * Sufficient check that a basic formula respects Omega|_n: the formula's
 * modulus (under the max tuple metric) lies below the coordinate modulus of
 * every variable it uses. Both aggregators dominate the max of the
 * coordinates, so this bounds the formula by Omega|_n. A false answer means
 * "not certified".
 */
inline bool check_basic_omega( const Formula& phi, const WeakModulus& omega, const Signature& sig )
{
    if ( !is_basic_formula( phi ) )
        throw InvalidArgument( "check_basic_omega needs a basic formula (a connective applied to atoms)" );
    check_formula( phi, sig );
    PwlModulus m = modulus_of( phi, sig );
    for ( auto v : free_variables( phi ) ) {
        auto c = omega.coordinate( v );
        if ( !c.is_rigid() && !modulus_leq( m, c.modulus() ) )
            return false;
    }
    return true;
}

struct OmegaOptions
{
    std::vector< Rational > scales{ 2, 3 };
    bool negations = true;
    // Binary connectives over atom pairs are added while there are at most this many atoms.
    std::size_t binary_atom_limit = 40;
    std::size_t max_formulas = 200'000;
};

// Candidate basic formulas over the given atoms, before certification.
inline std::vector< Formula > basic_candidates( const std::vector< Formula >& atoms, const OmegaOptions& opts )
{
    std::vector< Formula > out;
    auto push = [ & ]( Formula f ) {
        out.push_back( std::move( f ) );
        if ( out.size() > opts.max_formulas )
            throw ResourceError( "basic formula family exceeds the cap", opts.max_formulas );
    };
    for ( const auto& a : atoms ) {
        push( a );
        if ( opts.negations )
            push( Formula::neg( a ) );
        for ( const auto& q : opts.scales )
            push( Formula::scale( q, a ) );
    }
    if ( atoms.size() <= opts.binary_atom_limit )
        for ( std::size_t i = 0; i < atoms.size(); ++i )
            for ( std::size_t j = 0; j < atoms.size(); ++j ) {
                if ( i == j )
                    continue;
                push( Formula::trunc_sub( atoms[ i ], atoms[ j ] ) );
                if ( i < j ) {
                    push( Formula::trunc_add( atoms[ i ], atoms[ j ] ) );
                    push( Formula::min( { atoms[ i ], atoms[ j ] } ) );
                    push( Formula::max( { atoms[ i ], atoms[ j ] } ) );
                }
            }
    return out;
}

/*
 * Leaf over a generated family of basic formulas, each kept only when
 * check_basic_omega certifies it. The family for length n is every certified
 * candidate in the variables below n, so it grows with the position.
 */
class OmegaLeaf final : public LeafModel
{
    const NamedPair& _pair;
    WeakModulus _omega;
    std::size_t _term_depth;
    OmegaOptions _opts;
    std::size_t _prepared = 0;
    Rational _base{ 0 };
    std::vector< std::vector< Formula > > _groups;
    std::size_t _family_size = 0;

    [[nodiscard]] Rational diff( const Formula& f, const Position& p ) const
    {
        return abs( evaluate( f, _pair.left(), p.left ) - evaluate( f, _pair.right(), p.right ) );
    }

    void build( std::size_t length )
    {
        const auto& sig = _pair.signature();
        auto atoms = enumerate_atomic( sig, length, _term_depth );
        _groups.assign( length, {} );
        _family_size = 0;
        _base = 0;
        for ( auto& f : basic_candidates( atoms, _opts ) ) {
            if ( !check_basic_omega( f, _omega, sig ) )
                continue;
            ++_family_size;
            auto fv = free_variables( f );
            if ( fv.empty() )
                _base = std::max( _base, diff( f, {} ) );
            else
                _groups[ *fv.rbegin() ].push_back( std::move( f ) );
        }
        _prepared = length;
    }

public:
    OmegaLeaf( const NamedPair& pair, WeakModulus omega, std::size_t term_depth = 0, OmegaOptions opts = {} )
        : _pair{ pair }, _omega{ std::move( omega ) }, _term_depth{ term_depth }, _opts{ std::move( opts ) }
    {
        build( 0 );
    }

    void prepare( std::size_t length ) override
    {
        if ( length > _prepared )
            build( length );
    }

    [[nodiscard]] Rational base() const override { return _base; }

    [[nodiscard]] Rational delta( const Position& p ) const override
    {
        if ( p.size() == 0 )
            return 0;
        if ( p.size() > _prepared )
            throw InvalidArgument( "leaf model not prepared for position length " + std::to_string( p.size() ) );
        Rational worst{ 0 };
        for ( const auto& f : _groups[ p.size() - 1 ] )
            worst = std::max( worst, diff( f, p ) );
        return worst;
    }

    // The coordinate moduli depend on play order, so sets of pairs are not enough.
    [[nodiscard]] bool set_invariant() const override { return false; }

    [[nodiscard]] std::string describe() const override
    {
        return "omega (" + std::to_string( _family_size ) + " certified basic formulas at length " +
               std::to_string( _prepared ) + ")";
    }

    [[nodiscard]] std::size_t family_size() const { return _family_size; }
};

struct LeafFamily
{
    enum class Mode
    {
        Atomic,
        Omega
    };

    Mode mode = Mode::Atomic;
    std::size_t term_depth = 0;
    std::optional< WeakModulus > omega;
    OmegaOptions options;

    static LeafFamily atomic( std::size_t term_depth = 0 ) { return { Mode::Atomic, term_depth, std::nullopt, {} }; }
    static LeafFamily with_omega( WeakModulus omega, std::size_t term_depth = 0, OmegaOptions opts = {} )
    {
        return { Mode::Omega, term_depth, std::move( omega ), std::move( opts ) };
    }

    [[nodiscard]] std::unique_ptr< LeafModel > make( const NamedPair& pair ) const
    {
        if ( mode == Mode::Atomic )
            return std::make_unique< AtomicLeaf >( pair, term_depth );
        return std::make_unique< OmegaLeaf >( pair, *omega, term_depth, options );
    }
};

} // namespace cfo
