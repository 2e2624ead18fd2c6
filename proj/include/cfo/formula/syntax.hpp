#pragma once

#include "cfo/error.hpp"
#include "cfo/formula/ast.hpp"
#include "cfo/structures/signature.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfo
{

// ------------------------------------------------------------------ printing

namespace detail
{

inline std::string print_term( const Term& t )
{
    switch ( t.kind ) {
        case Term::Kind::Var: return "x" + std::to_string( t.var );
        case Term::Kind::Const: return t.name;
        case Term::Kind::Apply: {
            std::string s = t.name + "(";
            for ( std::size_t i = 0; i < t.args.size(); ++i )
                s += ( i ? ", " : "" ) + print_term( t.args[ i ] );
            return s + ")";
        }
    }
    return "?";
}

inline bool is_infix( const Formula& f )
{
    return f.kind == Formula::Kind::Conn &&
           ( f.conn.kind == Connective::Kind::TruncSub || f.conn.kind == Connective::Kind::TruncAdd );
}

std::string print_formula( const Formula& f );

// Operand position: wraps anything that would otherwise bind differently.
inline std::string print_operand( const Formula& f, bool allow_infix )
{
    if ( f.is_quantifier() || ( !allow_infix && is_infix( f ) ) )
        return "(" + print_formula( f ) + ")";
    return print_formula( f );
}

inline Formula substitute_slots( const ConnectiveExpr& e, const std::vector< Formula >& args )
{
    if ( e.is_slot )
        return args[ e.slot ];
    std::vector< Formula > kids;
    for ( const auto& c : e.children )
        kids.push_back( substitute_slots( c, args ) );
    return Formula::apply( e.op, std::move( kids ) );
}

inline std::string print_formula( const Formula& f )
{
    using K = Connective::Kind;
    switch ( f.kind ) {
        case Formula::Kind::Dist: return "d(" + print_term( f.terms[ 0 ] ) + ", " + print_term( f.terms[ 1 ] ) + ")";
        case Formula::Kind::Pred: {
            std::string s = f.name + "(";
            for ( std::size_t i = 0; i < f.terms.size(); ++i )
                s += ( i ? ", " : "" ) + print_term( f.terms[ i ] );
            return s + ")";
        }
        case Formula::Kind::Inf: return "inf x" + std::to_string( f.var ) + ". " + print_formula( f.children[ 0 ] );
        case Formula::Kind::Sup: return "sup x" + std::to_string( f.var ) + ". " + print_formula( f.children[ 0 ] );
        case Formula::Kind::Conn: break;
    }
    const auto& c = f.conn;
    switch ( c.kind ) {
        case K::Constant: return c.q.to_string();
        case K::Neg: return "1 - " + print_operand( f.children[ 0 ], false );
        case K::Scale: return c.q.to_string() + " * " + print_operand( f.children[ 0 ], false );
        case K::TruncSub:
        case K::TruncAdd:
            return print_operand( f.children[ 0 ], true ) + ( c.kind == K::TruncSub ? " -. " : " (+) " ) +
                   print_operand( f.children[ 1 ], false );
        case K::Min:
        case K::Max: {
            std::string s = c.kind == K::Min ? "min(" : "max(";
            for ( std::size_t i = 0; i < f.children.size(); ++i )
                s += ( i ? ", " : "" ) + print_formula( f.children[ i ] );
            return s + ")";
        }
        case K::Composite: return print_formula( substitute_slots( *c.expr, f.children ) );
    }
    return "?";
}

} // namespace detail

// Replaces composite connectives by the basis connectives they stand for.
inline Formula expand_composites( const Formula& f )
{
    Formula out = f;
    for ( auto& c : out.children )
        c = expand_composites( c );
    if ( f.kind == Formula::Kind::Conn && f.conn.kind == Connective::Kind::Composite )
        return expand_composites( detail::substitute_slots( *f.conn.expr, out.children ) );
    return out;
}

inline std::string to_string( const Term& t ) { return detail::print_term( t ); }
inline std::string to_string( const Formula& f ) { return detail::print_formula( f ); }

// ------------------------------------------------------------------- parsing

namespace detail
{

struct Token
{
    enum class Kind
    {
        Ident,
        Number,
        LParen,
        RParen,
        Comma,
        Dot,
        Minus,
        TruncSub,
        TruncAdd,
        Star,
        End
    };
    Kind kind;
    std::string text;
    std::size_t pos;
};

inline std::vector< Token > lex( std::string_view s )
{
    std::vector< Token > out;
    std::size_t i = 0;
    auto digit = [ & ]( std::size_t k ) { return k < s.size() && std::isdigit( static_cast< unsigned char >( s[ k ] ) ); };
    while ( i < s.size() ) {
        char ch = s[ i ];
        if ( std::isspace( static_cast< unsigned char >( ch ) ) ) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if ( std::isalpha( static_cast< unsigned char >( ch ) ) || ch == '_' ) {
            while ( i < s.size() && ( std::isalnum( static_cast< unsigned char >( s[ i ] ) ) || s[ i ] == '_' ) )
                ++i;
            out.push_back( { Token::Kind::Ident, std::string( s.substr( start, i - start ) ), start } );
        }
        else if ( digit( i ) || ( ch == '.' && digit( i + 1 ) ) ) {
            while ( digit( i ) )
                ++i;
            if ( i < s.size() && s[ i ] == '.' && digit( i + 1 ) ) {
                ++i;
                while ( digit( i ) )
                    ++i;
            }
            else if ( i < s.size() && s[ i ] == '/' && digit( i + 1 ) ) {
                ++i;
                while ( digit( i ) )
                    ++i;
            }
            out.push_back( { Token::Kind::Number, std::string( s.substr( start, i - start ) ), start } );
        }
        else if ( s.substr( i, 3 ) == "(+)" ) {
            out.push_back( { Token::Kind::TruncAdd, "(+)", start } );
            i += 3;
        }
        else if ( s.substr( i, 2 ) == "-." ) {
            out.push_back( { Token::Kind::TruncSub, "-.", start } );
            i += 2;
        }
        else {
            Token::Kind k;
            switch ( ch ) {
                case '(': k = Token::Kind::LParen; break;
                case ')': k = Token::Kind::RParen; break;
                case ',': k = Token::Kind::Comma; break;
                case '.': k = Token::Kind::Dot; break;
                case '-': k = Token::Kind::Minus; break;
                case '*': k = Token::Kind::Star; break;
                default: throw ParseError( std::string( "unexpected character '" ) + ch + "'", i );
            }
            out.push_back( { k, std::string( 1, ch ), start } );
            ++i;
        }
    }
    out.push_back( { Token::Kind::End, "", s.size() } );
    return out;
}

class Parser
{
    std::vector< Token > _toks;
    std::size_t _i = 0;
    const Signature* _sig;
    // Bound names other than x<digits>, innermost binding last.
    std::vector< std::pair< std::string, std::size_t > > _scope;
    std::map< std::string, std::size_t > _named;
    std::size_t _next_named = 0;

    const Token& peek( std::size_t k = 0 ) const { return _toks[ std::min( _i + k, _toks.size() - 1 ) ]; }
    const Token& next() { return _toks[ _i < _toks.size() - 1 ? _i++ : _i ]; }

    [[noreturn]] void fail( const std::string& what, const Token& at ) const
    {
        throw ParseError( what + ( at.kind == Token::Kind::End ? " (at end of input)" : ", found '" + at.text + "'" ), at.pos );
    }

    const Token& expect( Token::Kind k, const char* what )
    {
        if ( peek().kind != k )
            fail( std::string( "expected " ) + what, peek() );
        return next();
    }

    std::optional< std::size_t > bound_index( const std::string& name ) const
    {
        for ( auto it = _scope.rbegin(); it != _scope.rend(); ++it )
            if ( it->first == name )
                return it->second;
        return std::nullopt;
    }

    std::size_t variable_for_binding( const Token& t )
    {
        if ( is_variable_name( t.text ) )
            return std::stoull( t.text.substr( 1 ) );
        if ( is_reserved_name( t.text ) )
            fail( "cannot bind reserved name", t );
        if ( _sig && _sig->contains_name( t.text ) )
            fail( "cannot bind signature symbol", t );
        auto [ it, fresh ] = _named.emplace( t.text, _next_named );
        if ( fresh )
            ++_next_named;
        return it->second;
    }

    std::vector< Term > term_args()
    {
        expect( Token::Kind::LParen, "'('" );
        std::vector< Term > args;
        if ( peek().kind != Token::Kind::RParen ) {
            args.push_back( term() );
            while ( peek().kind == Token::Kind::Comma ) {
                next();
                args.push_back( term() );
            }
        }
        expect( Token::Kind::RParen, "')'" );
        return args;
    }

    Term term()
    {
        const Token& t = peek();
        if ( t.kind != Token::Kind::Ident )
            fail( "expected a term", t );
        next();
        if ( is_variable_name( t.text ) )
            return Term::variable( std::stoull( t.text.substr( 1 ) ) );
        if ( auto b = bound_index( t.text ) )
            return Term::variable( *b );
        if ( is_reserved_name( t.text ) )
            fail( "reserved word used as a term", t );
        if ( peek().kind == Token::Kind::LParen ) {
            auto args = term_args();
            if ( _sig ) {
                auto i = _sig->function_index( t.text );
                if ( !i )
                    fail( "unknown function symbol", t );
                if ( _sig->functions()[ *i ].arity != args.size() )
                    fail( "function '" + t.text + "' has arity " + std::to_string( _sig->functions()[ *i ].arity ) +
                              ", applied to " + std::to_string( args.size() ) + " arguments",
                          t );
            }
            return Term::apply( t.text, std::move( args ) );
        }
        if ( _sig && !_sig->constant_index( t.text ) )
            fail( "unknown constant symbol", t );
        return Term::constant( t.text );
    }

    std::vector< Formula > formula_args()
    {
        expect( Token::Kind::LParen, "'('" );
        std::vector< Formula > args{ formula() };
        while ( peek().kind == Token::Kind::Comma ) {
            next();
            args.push_back( formula() );
        }
        expect( Token::Kind::RParen, "')'" );
        return args;
    }

    Formula unary()
    {
        const Token t = peek();
        switch ( t.kind ) {
            case Token::Kind::LParen: {
                next();
                Formula f = formula();
                expect( Token::Kind::RParen, "')'" );
                return f;
            }
            case Token::Kind::Number: {
                next();
                Rational q = Rational::parse( t.text );
                if ( peek().kind == Token::Kind::Star ) {
                    next();
                    return Formula::scale( q, unary() );
                }
                if ( peek().kind == Token::Kind::Minus ) {
                    if ( q != 1 )
                        fail( "only '1 - phi' is supported as negation", peek() );
                    next();
                    return Formula::neg( unary() );
                }
                if ( q > 1 )
                    fail( "constant connective must lie in [0,1]", t );
                return Formula::constant( q );
            }
            case Token::Kind::Ident: break;
            default: fail( "expected a formula", t );
        }
        next();
        if ( t.text == "inf" || t.text == "sup" ) {
            const Token& v = expect( Token::Kind::Ident, "a variable after the quantifier" );
            std::size_t idx = variable_for_binding( v );
            expect( Token::Kind::Dot, "'.' after the bound variable" );
            bool named = !is_variable_name( v.text );
            if ( named )
                _scope.emplace_back( v.text, idx );
            Formula body = formula();
            if ( named )
                _scope.pop_back();
            return t.text == "inf" ? Formula::inf( idx, std::move( body ) ) : Formula::sup( idx, std::move( body ) );
        }
        if ( t.text == "min" || t.text == "max" ) {
            auto args = formula_args();
            return t.text == "min" ? Formula::min( std::move( args ) ) : Formula::max( std::move( args ) );
        }
        if ( t.text == "d" ) {
            auto args = term_args();
            if ( args.size() != 2 )
                fail( "d takes exactly two terms", t );
            return Formula::dist( std::move( args[ 0 ] ), std::move( args[ 1 ] ) );
        }
        if ( is_variable_name( t.text ) || bound_index( t.text ) )
            fail( "a variable is not a formula", t );
        if ( peek().kind != Token::Kind::LParen )
            fail( "expected '(' after predicate symbol", peek() );
        auto args = term_args();
        if ( _sig ) {
            auto i = _sig->predicate_index( t.text );
            if ( !i )
                fail( "unknown predicate symbol", t );
            if ( _sig->predicates()[ *i ].arity != args.size() )
                fail( "predicate '" + t.text + "' has arity " + std::to_string( _sig->predicates()[ *i ].arity ) +
                          ", applied to " + std::to_string( args.size() ) + " arguments",
                      t );
        }
        return Formula::pred( t.text, std::move( args ) );
    }

public:
    Parser( std::string_view text, const Signature* sig ) : _toks{ lex( text ) }, _sig{ sig }
    {
        for ( const auto& t : _toks )
            if ( t.kind == Token::Kind::Ident && is_variable_name( t.text ) )
                _next_named = std::max( _next_named, static_cast< std::size_t >( std::stoull( t.text.substr( 1 ) ) ) + 1 );
    }

    Formula formula()
    {
        Formula lhs = unary();
        while ( peek().kind == Token::Kind::TruncSub || peek().kind == Token::Kind::TruncAdd ) {
            bool sub = next().kind == Token::Kind::TruncSub;
            Formula rhs = unary();
            lhs = sub ? Formula::trunc_sub( std::move( lhs ), std::move( rhs ) )
                      : Formula::trunc_add( std::move( lhs ), std::move( rhs ) );
        }
        return lhs;
    }

    Formula parse_all()
    {
        Formula f = formula();
        if ( peek().kind != Token::Kind::End )
            fail( "unexpected trailing input", peek() );
        return f;
    }
};

} // namespace detail

/*
 * Parses the formula language. Quantifier bodies extend as far right as
 * possible. A quantifier may bind a name other than x<digits>; such a name is
 * given a fresh variable index above every x<digits> in the text. With a
 * signature, unknown symbols and arity mismatches are rejected.
 */
inline Formula parse_formula( std::string_view text, const Signature* sig = nullptr )
{
    return detail::Parser( text, sig ).parse_all();
}

inline Formula parse_formula( std::string_view text, const Signature& sig ) { return parse_formula( text, &sig ); }

} // namespace cfo
