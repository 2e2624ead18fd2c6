#pragma once

#include "cfo/formula/ast.hpp"
#include "cfo/structures/signature.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <random>
#include <vector>

namespace cfo
{

struct SampleOptions
{
    // Free variables are drawn from x0..x{free_vars-1}; 0 gives sentences.
    std::size_t free_vars = 2;
    // Upper bound on the number of connective and quantifier nodes.
    std::size_t max_size = 8;
    std::size_t term_depth = 1;
};

namespace detail
{

class FormulaSampler
{
    const Signature& _sig;
    const SampleOptions& _opts;
    std::mt19937_64 _rng;
    std::size_t _budget = 0;

    std::size_t below( std::size_t n ) { return n == 0 ? 0 : static_cast< std::size_t >( _rng() % n ); }

    Rational pick( std::initializer_list< Rational > qs )
    {
        auto it = qs.begin();
        std::advance( it, static_cast< std::ptrdiff_t >( below( qs.size() ) ) );
        return *it;
    }

    Term term( const std::vector< std::size_t >& scope, std::size_t depth )
    {
        std::size_t leaves = scope.size() + _sig.constants().size();
        bool apply = !_sig.functions().empty() && depth > 0 && ( leaves == 0 || below( 3 ) == 0 );
        if ( apply ) {
            std::vector< const SymbolSpec* > usable;
            for ( const auto& f : _sig.functions() )
                if ( leaves > 0 || f.arity == 0 )
                    usable.push_back( &f );
            const auto& f = *usable[ below( usable.size() ) ];
            std::vector< Term > args;
            for ( std::size_t i = 0; i < f.arity; ++i )
                args.push_back( term( scope, depth - 1 ) );
            return Term::apply( f.name, std::move( args ) );
        }
        std::size_t i = below( leaves );
        if ( i < scope.size() )
            return Term::variable( scope[ i ] );
        return Term::constant( _sig.constants()[ i - scope.size() ] );
    }

    bool can_make_term( const std::vector< std::size_t >& scope ) const
    {
        if ( !scope.empty() || !_sig.constants().empty() )
            return true;
        for ( const auto& f : _sig.functions() )
            if ( f.arity == 0 )
                return _opts.term_depth > 0;
        return false;
    }

    Formula atom( const std::vector< std::size_t >& scope )
    {
        std::size_t choice = below( _sig.predicates().size() + 1 );
        if ( choice == _sig.predicates().size() ) {
            Term a = term( scope, _opts.term_depth );
            return Formula::dist( std::move( a ), term( scope, _opts.term_depth ) );
        }
        const auto& p = _sig.predicates()[ choice ];
        std::vector< Term > args;
        for ( std::size_t i = 0; i < p.arity; ++i )
            args.push_back( term( scope, _opts.term_depth ) );
        return Formula::pred( p.name, std::move( args ) );
    }

    Formula quantifier( std::size_t qr_left, std::vector< std::size_t > scope )
    {
        // Sometimes rebind a variable already in scope.
        std::size_t fresh = _opts.free_vars;
        for ( auto v : scope )
            fresh = std::max( fresh, v + 1 );
        std::size_t var = !scope.empty() && below( 4 ) == 0 ? scope[ below( scope.size() ) ] : fresh;
        if ( std::find( scope.begin(), scope.end(), var ) == scope.end() )
            scope.push_back( var );
        Formula body = formula( qr_left - 1, scope );
        return below( 2 ) ? Formula::inf( var, std::move( body ) ) : Formula::sup( var, std::move( body ) );
    }

public:
    FormulaSampler( const Signature& sig, const SampleOptions& opts, std::uint64_t seed )
        : _sig{ sig }, _opts{ opts }, _rng{ seed }
    {
    }

    Formula formula( std::size_t qr_left, const std::vector< std::size_t >& scope )
    {
        if ( _budget == 0 ) {
            if ( can_make_term( scope ) )
                return atom( scope );
            if ( qr_left > 0 )
                return quantifier( qr_left, scope );
            return Formula::constant( pick( { 0, Rational( 1, 2 ), 1 } ) );
        }
        --_budget;
        std::size_t roll = below( 12 );
        if ( roll < 3 && can_make_term( scope ) ) {
            ++_budget;
            return atom( scope );
        }
        if ( ( roll < 6 || !can_make_term( scope ) ) && qr_left > 0 )
            return quantifier( qr_left, scope );
        switch ( below( 7 ) ) {
            case 0: return Formula::constant( pick( { 0, Rational( 1, 4 ), Rational( 1, 2 ), Rational( 3, 4 ), 1 } ) );
            case 1: return Formula::neg( formula( qr_left, scope ) );
            case 2: {
                Formula a = formula( qr_left, scope );
                return Formula::trunc_sub( std::move( a ), formula( qr_left, scope ) );
            }
            case 3: {
                Formula a = formula( qr_left, scope );
                return Formula::trunc_add( std::move( a ), formula( qr_left, scope ) );
            }
            case 4:
            case 5: {
                std::vector< Formula > args;
                std::size_t k = 1 + below( 3 );
                for ( std::size_t i = 0; i < k; ++i )
                    args.push_back( formula( qr_left, scope ) );
                return below( 2 ) ? Formula::min( std::move( args ) ) : Formula::max( std::move( args ) );
            }
            default: return Formula::scale( pick( { Rational( 1, 2 ), 2, 3 } ), formula( qr_left, scope ) );
        }
    }

    Formula next( std::size_t qr_bound )
    {
        _budget = below( _opts.max_size + 1 );
        std::vector< std::size_t > scope;
        for ( std::size_t i = 0; i < _opts.free_vars; ++i )
            scope.push_back( i );
        return formula( qr_bound, scope );
    }
};

} // namespace detail

/*
 * Random well-formed formulas with quantifier rank at most qr_bound. The
 * sequence depends only on the arguments.
 */
inline std::vector< Formula > sample_formulas( const Signature& sig, std::size_t qr_bound, std::size_t count,
                                               std::uint64_t seed, const SampleOptions& opts = {} )
{
    detail::FormulaSampler sampler( sig, opts, seed );
    std::vector< Formula > out;
    out.reserve( count );
    for ( std::size_t i = 0; i < count; ++i )
        out.push_back( sampler.next( qr_bound ) );
    return out;
}

} // namespace cfo
