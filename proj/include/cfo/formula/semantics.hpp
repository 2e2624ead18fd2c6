#pragma once

#include "cfo/formula/ast.hpp"
#include "cfo/structures/structure.hpp"

#include <limits>
#include <set>
#include <span>
#include <vector>

namespace cfo
{

// Variable index -> point; unassigned entries hold `unassigned`.
using Assignment = std::vector< Point >;
inline constexpr Point unassigned = std::numeric_limits< Point >::max();

// ---------------------------------------------------------------- connectives

namespace detail
{

inline Rational apply_basic( const Connective& c, std::span< const Rational > x )
{
    using K = Connective::Kind;
    switch ( c.kind ) {
        case K::Constant: return c.q;
        case K::Neg: return Rational( 1 ) - x[ 0 ];
        case K::TruncSub: return monus( x[ 0 ], x[ 1 ] );
        case K::TruncAdd: return std::min( Rational( 1 ), x[ 0 ] + x[ 1 ] );
        case K::Scale: return std::min( Rational( 1 ), c.q * x[ 0 ] );
        case K::Min: return *std::min_element( x.begin(), x.end() );
        case K::Max: return *std::max_element( x.begin(), x.end() );
        case K::Composite: break;
    }
    throw InvalidArgument( "composite connective reached basic evaluation" );
}

} // namespace detail

Rational apply_connective( const Connective& c, std::span< const Rational > x );

inline Rational eval_connective_expr( const ConnectiveExpr& e, std::span< const Rational > x )
{
    if ( e.is_slot )
        return x[ e.slot ];
    std::vector< Rational > args;
    args.reserve( e.children.size() );
    for ( const auto& ch : e.children )
        args.push_back( eval_connective_expr( ch, x ) );
    return apply_connective( e.op, args );
}

inline Rational apply_connective( const Connective& c, std::span< const Rational > x )
{
    if ( x.size() != c.arity() )
        throw InvalidArgument( "connective arity mismatch" );
    if ( c.kind == Connective::Kind::Composite )
        return eval_connective_expr( *c.expr, x );
    return detail::apply_basic( c, x );
}

/*
 * Modulus of a connective on [0,1]^k in the max metric. Neg, Min and Max are
 * 1-Lipschitz; truncated subtraction and addition move by up to twice the
 * coordinate change, so they get min(2t, 1).
 */
inline PwlModulus connective_modulus( const Connective& c );

inline PwlModulus connective_expr_modulus( const ConnectiveExpr& e )
{
    if ( e.is_slot )
        return PwlModulus::identity();
    PwlModulus inner = PwlModulus::zero();
    for ( const auto& ch : e.children )
        inner = modulus_max( inner, connective_expr_modulus( ch ) );
    return compose( connective_modulus( e.op ), inner );
}

inline PwlModulus connective_modulus( const Connective& c )
{
    using K = Connective::Kind;
    switch ( c.kind ) {
        case K::Constant: return PwlModulus::zero();
        case K::Neg:
        case K::Min:
        case K::Max: return PwlModulus::identity();
        case K::TruncSub:
        case K::TruncAdd: return PwlModulus::capped_linear( 2 );
        case K::Scale: return PwlModulus::capped_linear( c.q );
        case K::Composite: return connective_expr_modulus( *c.expr );
    }
    return PwlModulus::identity();
}

inline bool is_one_lipschitz( const Connective& c ) { return modulus_leq( connective_modulus( c ), PwlModulus::identity() ); }

// ------------------------------------------------------------ well-formedness

inline void check_term( const Term& t, const Signature& sig )
{
    switch ( t.kind ) {
        case Term::Kind::Var: return;
        case Term::Kind::Const:
            if ( !sig.constant_index( t.name ) )
                throw InvalidArgument( "unknown constant '" + t.name + "'" );
            return;
        case Term::Kind::Apply: {
            auto i = sig.function_index( t.name );
            if ( !i )
                throw InvalidArgument( "unknown function '" + t.name + "'" );
            if ( sig.functions()[ *i ].arity != t.args.size() )
                throw InvalidArgument( "function '" + t.name + "' has arity " + std::to_string( sig.functions()[ *i ].arity ) +
                                       ", applied to " + std::to_string( t.args.size() ) );
            for ( const auto& a : t.args )
                check_term( a, sig );
            return;
        }
    }
}

// Throws InvalidArgument naming the first unknown symbol or arity mismatch.
inline void check_formula( const Formula& f, const Signature& sig )
{
    switch ( f.kind ) {
        case Formula::Kind::Dist:
            if ( f.terms.size() != 2 )
                throw InvalidArgument( "d takes two terms" );
            break;
        case Formula::Kind::Pred: {
            auto i = sig.predicate_index( f.name );
            if ( !i )
                throw InvalidArgument( "unknown predicate '" + f.name + "'" );
            if ( sig.predicates()[ *i ].arity != f.terms.size() )
                throw InvalidArgument( "predicate '" + f.name + "' has arity " + std::to_string( sig.predicates()[ *i ].arity ) +
                                       ", applied to " + std::to_string( f.terms.size() ) );
            break;
        }
        case Formula::Kind::Conn:
            if ( f.children.size() != f.conn.arity() )
                throw InvalidArgument( "connective arity mismatch" );
            break;
        case Formula::Kind::Inf:
        case Formula::Kind::Sup:
            if ( f.children.size() != 1 )
                throw InvalidArgument( "quantifier needs one body" );
            break;
    }
    for ( const auto& t : f.terms )
        check_term( t, sig );
    for ( const auto& c : f.children )
        check_formula( c, sig );
}

inline bool is_well_formed( const Formula& f, const Signature& sig )
{
    try {
        check_formula( f, sig );
        return true;
    }
    catch ( const InvalidArgument& ) {
        return false;
    }
}

// ------------------------------------------------------------------ syntax

inline std::size_t qr( const Formula& f )
{
    std::size_t r = 0;
    for ( const auto& c : f.children )
        r = std::max( r, qr( c ) );
    return f.is_quantifier() ? r + 1 : r;
}

inline void term_variables( const Term& t, std::set< std::size_t >& out )
{
    if ( t.kind == Term::Kind::Var )
        out.insert( t.var );
    for ( const auto& a : t.args )
        term_variables( a, out );
}

inline std::set< std::size_t > free_variables( const Formula& f )
{
    std::set< std::size_t > out;
    for ( const auto& t : f.terms )
        term_variables( t, out );
    for ( const auto& c : f.children ) {
        auto sub = free_variables( c );
        if ( f.is_quantifier() )
            sub.erase( f.var );
        out.insert( sub.begin(), sub.end() );
    }
    return out;
}

// Largest term nesting depth occurring in f.
inline std::size_t term_depth( const Formula& f )
{
    std::size_t d = 0;
    for ( const auto& t : f.terms )
        d = std::max( d, t.depth() );
    for ( const auto& c : f.children )
        d = std::max( d, term_depth( c ) );
    return d;
}

// --------------------------------------------------------------- evaluation

inline Point eval_term( const Term& t, const MetricStructure& s, const Assignment& a )
{
    switch ( t.kind ) {
        case Term::Kind::Var:
            if ( t.var >= a.size() || a[ t.var ] == unassigned )
                throw InvalidArgument( "variable x" + std::to_string( t.var ) + " is unassigned" );
            return a[ t.var ];
        case Term::Kind::Const: return s.constant( t.name );
        case Term::Kind::Apply: {
            Tuple args;
            args.reserve( t.args.size() );
            for ( const auto& x : t.args )
                args.push_back( eval_term( x, s, a ) );
            return s.function( t.name, args );
        }
    }
    return 0;
}

namespace detail
{

inline Rational evaluate_in( const Formula& f, const MetricStructure& s, Assignment& a )
{
    switch ( f.kind ) {
        case Formula::Kind::Dist: return s.dist( eval_term( f.terms[ 0 ], s, a ), eval_term( f.terms[ 1 ], s, a ) );
        case Formula::Kind::Pred: {
            Tuple args;
            args.reserve( f.terms.size() );
            for ( const auto& t : f.terms )
                args.push_back( eval_term( t, s, a ) );
            return s.predicate( f.name, args );
        }
        case Formula::Kind::Conn: {
            std::vector< Rational > vals;
            vals.reserve( f.children.size() );
            for ( const auto& c : f.children )
                vals.push_back( evaluate_in( c, s, a ) );
            return apply_connective( f.conn, vals );
        }
        case Formula::Kind::Inf:
        case Formula::Kind::Sup: {
            if ( a.size() <= f.var )
                a.resize( f.var + 1, unassigned );
            Point saved = a[ f.var ];
            Rational best = f.kind == Formula::Kind::Inf ? Rational( 1 ) : Rational( 0 );
            for ( Point p = 0; p < s.size(); ++p ) {
                a[ f.var ] = p;
                Rational v = evaluate_in( f.children[ 0 ], s, a );
                best = f.kind == Formula::Kind::Inf ? std::min( best, v ) : std::max( best, v );
            }
            a[ f.var ] = saved;
            return best;
        }
    }
    return 0;
}

} // namespace detail

// Exact value of f in s; quantifiers range over the finite domain.
inline Rational evaluate( const Formula& f, const MetricStructure& s, Assignment a = {} )
{
    return detail::evaluate_in( f, s, a );
}

// ------------------------------------------------------------ modulus calculus

inline PwlModulus term_modulus( const Term& t, const Signature& sig )
{
    switch ( t.kind ) {
        case Term::Kind::Var: return PwlModulus::identity();
        case Term::Kind::Const: return PwlModulus::zero();
        case Term::Kind::Apply: {
            PwlModulus inner = PwlModulus::zero();
            for ( const auto& a : t.args )
                inner = modulus_max( inner, term_modulus( a, sig ) );
            auto i = sig.function_index( t.name );
            if ( !i )
                throw InvalidArgument( "unknown function '" + t.name + "'" );
            return compose( sig.functions()[ *i ].modulus, inner );
        }
    }
    return PwlModulus::identity();
}

/*
 * A modulus for f as a function of its variables in the max metric: terms
 * compose function moduli, d contributes min(2t, 1), predicates compose their
 * modulus with the argument bound, connectives apply their own modulus, and
 * quantifiers leave the bound unchanged.
 */
inline PwlModulus modulus_of( const Formula& f, const Signature& sig )
{
    switch ( f.kind ) {
        case Formula::Kind::Dist:
            return compose( PwlModulus::capped_linear( 2 ),
                            modulus_max( term_modulus( f.terms[ 0 ], sig ), term_modulus( f.terms[ 1 ], sig ) ) );
        case Formula::Kind::Pred: {
            PwlModulus inner = PwlModulus::zero();
            for ( const auto& t : f.terms )
                inner = modulus_max( inner, term_modulus( t, sig ) );
            auto i = sig.predicate_index( f.name );
            if ( !i )
                throw InvalidArgument( "unknown predicate '" + f.name + "'" );
            return compose( sig.predicates()[ *i ].modulus, inner );
        }
        case Formula::Kind::Conn: {
            PwlModulus inner = PwlModulus::zero();
            for ( const auto& c : f.children )
                inner = modulus_max( inner, modulus_of( c, sig ) );
            return compose( connective_modulus( f.conn ), inner );
        }
        case Formula::Kind::Inf:
        case Formula::Kind::Sup: return modulus_of( f.children[ 0 ], sig );
    }
    return PwlModulus::identity();
}

/*
 * Modulus turning the precision of a game position into a bound on the
 * difference of f's values: identity at atoms, the connective's modulus over
 * the children's bounds, unchanged through quantifiers.
 */
inline PwlModulus theta_of( const Formula& f )
{
    if ( f.is_atomic() )
        return PwlModulus::identity();
    if ( f.is_quantifier() )
        return theta_of( f.children[ 0 ] );
    PwlModulus inner = PwlModulus::zero();
    for ( const auto& c : f.children )
        inner = modulus_max( inner, theta_of( c ) );
    return compose( connective_modulus( f.conn ), inner );
}

inline bool is_delta_formula( const Formula& f, const PwlModulus& delta, const Signature& sig )
{
    if ( f.is_atomic() )
        return modulus_leq( modulus_of( f, sig ), delta );
    if ( f.is_quantifier() )
        return is_delta_formula( f.children[ 0 ], delta, sig );
    const auto m = connective_modulus( f.conn );
    if ( !modulus_leq( m, delta ) && !modulus_leq( m, PwlModulus::identity() ) )
        return false;
    for ( const auto& c : f.children )
        if ( !( c.is_atomic() || c.is_quantifier() ) || !is_delta_formula( c, delta, sig ) )
            return false;
    return true;
}

// ------------------------------------------------------------------ rewrites

// sup x. phi  ~>  1 -. inf x. (1 -. phi), everywhere.
inline Formula normalize_sup( const Formula& f )
{
    Formula out = f;
    for ( auto& c : out.children )
        c = normalize_sup( c );
    if ( f.kind == Formula::Kind::Sup )
        return Formula::neg( Formula::inf( f.var, Formula::neg( out.children[ 0 ] ) ) );
    return out;
}

namespace detail
{

// Flattens a maximal block of connective nodes into an expression over the
// non-connective formulas below it.
inline ConnectiveExpr collapse_block( const Formula& f, std::vector< Formula >& leaves );

} // namespace detail

Formula collapse_connectives( const Formula& f );

namespace detail
{

inline ConnectiveExpr collapse_block( const Formula& f, std::vector< Formula >& leaves )
{
    if ( f.kind != Formula::Kind::Conn ) {
        leaves.push_back( collapse_connectives( f ) );
        return ConnectiveExpr{ true, leaves.size() - 1, {}, {} };
    }
    ConnectiveExpr e{ false, 0, f.conn, {} };
    for ( const auto& c : f.children )
        e.children.push_back( collapse_block( c, leaves ) );
    return e;
}

} // namespace detail

// Replaces directly nested connectives by one composite connective.
inline Formula collapse_connectives( const Formula& f )
{
    if ( f.kind != Formula::Kind::Conn ) {
        Formula out = f;
        for ( auto& c : out.children )
            c = collapse_connectives( c );
        return out;
    }
    bool nested = std::any_of( f.children.begin(), f.children.end(),
                               []( const Formula& c ) { return c.kind == Formula::Kind::Conn; } );
    if ( !nested ) {
        Formula out = f;
        for ( auto& c : out.children )
            c = collapse_connectives( c );
        return out;
    }
    std::vector< Formula > leaves;
    auto expr = detail::collapse_block( f, leaves );
    auto k = leaves.size();
    return Formula::apply( Connective::composite( std::move( expr ), k ), std::move( leaves ) );
}

} // namespace cfo
