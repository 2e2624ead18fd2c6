#pragma once

#include "cfo/error.hpp"
#include "cfo/numerics/modulus.hpp"
#include "cfo/numerics/rational.hpp"

#include <compare>
#include <memory>
#include <string>
#include <vector>

namespace cfo
{

struct Term
{
    enum class Kind
    {
        Var,
        Const,
        Apply
    };

    Kind kind = Kind::Var;
    std::size_t var = 0;
    std::string name;
    std::vector< Term > args;

    static Term variable( std::size_t i ) { return Term{ Kind::Var, i, {}, {} }; }
    static Term constant( std::string name ) { return Term{ Kind::Const, 0, std::move( name ), {} }; }
    static Term apply( std::string f, std::vector< Term > args ) { return Term{ Kind::Apply, 0, std::move( f ), std::move( args ) }; }

    // Nesting depth of function applications.
    [[nodiscard]] std::size_t depth() const
    {
        std::size_t d = 0;
        for ( const auto& a : args )
            d = std::max( d, a.depth() );
        return kind == Kind::Apply ? d + 1 : 0;
    }

    friend bool operator==( const Term&, const Term& ) = default;
    friend std::strong_ordering operator<=>( const Term& a, const Term& b )
    {
        if ( auto c = a.kind <=> b.kind; c != 0 )
            return c;
        if ( auto c = a.var <=> b.var; c != 0 )
            return c;
        if ( auto c = a.name <=> b.name; c != 0 )
            return c;
        return a.args <=> b.args;
    }
};

struct ConnectiveExpr;

/*
 * The connective basis. Composite holds a tree of basis connectives over
 * argument slots and is produced only by collapsing nested connectives.
 */
struct Connective
{
    enum class Kind
    {
        Constant,
        Neg,
        TruncSub,
        Min,
        Max,
        TruncAdd,
        Scale,
        Composite
    };

    Kind kind = Kind::Neg;
    Rational q{ 0 };
    std::size_t width = 1;
    std::shared_ptr< const ConnectiveExpr > expr;

    static Connective constant( Rational q );
    static Connective neg() { return { Kind::Neg, 0, 1, {} }; }
    static Connective trunc_sub() { return { Kind::TruncSub, 0, 2, {} }; }
    static Connective trunc_add() { return { Kind::TruncAdd, 0, 2, {} }; }
    static Connective min( std::size_t k );
    static Connective max( std::size_t k );
    static Connective scale( Rational q );
    static Connective composite( ConnectiveExpr expr, std::size_t arity );

    [[nodiscard]] std::size_t arity() const { return width; }

    friend bool operator==( const Connective& a, const Connective& b );
};

// A tree of basis connectives whose leaves are argument slots.
struct ConnectiveExpr
{
    bool is_slot = true;
    std::size_t slot = 0;
    Connective op;
    std::vector< ConnectiveExpr > children;

    friend bool operator==( const ConnectiveExpr& a, const ConnectiveExpr& b )
    {
        return a.is_slot == b.is_slot && a.slot == b.slot && ( a.is_slot || a.op == b.op ) && a.children == b.children;
    }
};

inline Connective Connective::constant( Rational q )
{
    if ( q.sign() < 0 || q > 1 )
        throw InvalidArgument( "constant connective must lie in [0,1], got " + q.to_string() );
    return { Kind::Constant, q, 0, {} };
}

inline Connective Connective::min( std::size_t k )
{
    if ( k == 0 )
        throw InvalidArgument( "min needs at least one argument" );
    return { Kind::Min, 0, k, {} };
}

inline Connective Connective::max( std::size_t k )
{
    if ( k == 0 )
        throw InvalidArgument( "max needs at least one argument" );
    return { Kind::Max, 0, k, {} };
}

inline Connective Connective::scale( Rational q )
{
    if ( q.sign() < 0 )
        throw InvalidArgument( "scale factor must be >= 0, got " + q.to_string() );
    return { Kind::Scale, q, 1, {} };
}

inline Connective Connective::composite( ConnectiveExpr expr, std::size_t arity )
{
    return { Kind::Composite, 0, arity, std::make_shared< const ConnectiveExpr >( std::move( expr ) ) };
}

inline bool operator==( const Connective& a, const Connective& b )
{
    if ( a.kind != b.kind || a.q != b.q || a.width != b.width )
        return false;
    if ( a.kind != Connective::Kind::Composite )
        return true;
    return *a.expr == *b.expr;
}

struct Formula
{
    enum class Kind
    {
        Dist,
        Pred,
        Conn,
        Inf,
        Sup
    };

    Kind kind = Kind::Dist;
    std::string name;
    std::vector< Term > terms;
    Connective conn;
    std::vector< Formula > children;
    std::size_t var = 0;

    static Formula dist( Term a, Term b )
    {
        Formula f;
        f.kind = Kind::Dist;
        f.terms = { std::move( a ), std::move( b ) };
        return f;
    }
    static Formula pred( std::string name, std::vector< Term > args )
    {
        Formula f;
        f.kind = Kind::Pred;
        f.name = std::move( name );
        f.terms = std::move( args );
        return f;
    }
    static Formula apply( Connective c, std::vector< Formula > args )
    {
        if ( args.size() != c.arity() )
            throw InvalidArgument( "connective of arity " + std::to_string( c.arity() ) + " applied to " +
                                   std::to_string( args.size() ) + " formulas" );
        Formula f;
        f.kind = Kind::Conn;
        f.conn = std::move( c );
        f.children = std::move( args );
        return f;
    }
    static Formula inf( std::size_t var, Formula body ) { return quantified( Kind::Inf, var, std::move( body ) ); }
    static Formula sup( std::size_t var, Formula body ) { return quantified( Kind::Sup, var, std::move( body ) ); }

    static Formula constant( Rational q ) { return apply( Connective::constant( q ), {} ); }
    static Formula neg( Formula a ) { return apply( Connective::neg(), { std::move( a ) } ); }
    static Formula trunc_sub( Formula a, Formula b ) { return apply( Connective::trunc_sub(), { std::move( a ), std::move( b ) } ); }
    static Formula trunc_add( Formula a, Formula b ) { return apply( Connective::trunc_add(), { std::move( a ), std::move( b ) } ); }
    static Formula min( std::vector< Formula > args )
    {
        auto k = args.size();
        return apply( Connective::min( k ), std::move( args ) );
    }
    static Formula max( std::vector< Formula > args )
    {
        auto k = args.size();
        return apply( Connective::max( k ), std::move( args ) );
    }
    static Formula scale( Rational q, Formula a ) { return apply( Connective::scale( q ), { std::move( a ) } ); }

    [[nodiscard]] bool is_atomic() const { return kind == Kind::Dist || kind == Kind::Pred; }
    [[nodiscard]] bool is_quantifier() const { return kind == Kind::Inf || kind == Kind::Sup; }

    friend bool operator==( const Formula&, const Formula& ) = default;

private:
    static Formula quantified( Kind k, std::size_t var, Formula body )
    {
        Formula f;
        f.kind = k;
        f.var = var;
        f.children = { std::move( body ) };
        return f;
    }
};

} // namespace cfo
