#pragma once

#include "cfo/error.hpp"
#include "cfo/numerics/modulus.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <type_traits>
#include <string>
#include <vector>

namespace cfo
{

struct SymbolSpec
{
    std::string name;
    std::size_t arity = 0;
    PwlModulus modulus;

    friend bool operator==( const SymbolSpec&, const SymbolSpec& ) = default;
};

namespace detail
{

inline bool is_variable_name( const std::string& s )
{
    return s.size() >= 2 && s[ 0 ] == 'x' &&
           std::all_of( s.begin() + 1, s.end(), []( unsigned char ch ) { return std::isdigit( ch ); } );
}

inline bool is_identifier( const std::string& s )
{
    if ( s.empty() || !( std::isalpha( static_cast< unsigned char >( s[ 0 ] ) ) || s[ 0 ] == '_' ) )
        return false;
    return std::all_of( s.begin(), s.end(), []( unsigned char ch ) { return std::isalnum( ch ) || ch == '_'; } );
}

// Names the formula language claims for itself.
inline bool is_reserved_name( const std::string& s )
{
    static const std::set< std::string > reserved{ "d", "inf", "sup", "min", "max" };
    return reserved.contains( s ) || is_variable_name( s );
}

} // namespace detail

/*
 * A metric signature: predicate and function symbols with arities and moduli,
 * and constant symbols. The metric bound is fixed at 1 and every predicate
 * takes values in [0, 1].
 */
class Signature
{
    std::vector< SymbolSpec > _predicates;
    std::vector< SymbolSpec > _functions;
    std::vector< std::string > _constants;

    template < typename F >
    void each_name( F&& f ) const
    {
        for ( const auto& p : _predicates )
            f( p.name );
        for ( const auto& p : _functions )
            f( p.name );
        for ( const auto& c : _constants )
            f( c );
    }

    void check() const
    {
        std::set< std::string > seen;
        each_name( [ & ]( const std::string& n ) {
            if ( !detail::is_identifier( n ) )
                throw InvalidArgument( "symbol name '" + n + "' is not an identifier" );
            if ( detail::is_reserved_name( n ) )
                throw InvalidArgument( "symbol name '" + n + "' is reserved" );
            if ( !seen.insert( n ).second )
                throw InvalidArgument( "duplicate symbol name '" + n + "'" );
        } );
    }

    template < typename V >
    static std::optional< std::size_t > find( const V& v, const std::string& name )
    {
        for ( std::size_t i = 0; i < v.size(); ++i ) {
            if constexpr ( std::is_same_v< typename V::value_type, std::string > ) {
                if ( v[ i ] == name )
                    return i;
            }
            else if ( v[ i ].name == name )
                return i;
        }
        return std::nullopt;
    }

public:
    Signature() = default;
    Signature( std::vector< SymbolSpec > predicates, std::vector< SymbolSpec > functions,
               std::vector< std::string > constants )
        : _predicates{ std::move( predicates ) }, _functions{ std::move( functions ) }, _constants{ std::move( constants ) }
    {
        check();
    }

    [[nodiscard]] const std::vector< SymbolSpec >& predicates() const { return _predicates; }
    [[nodiscard]] const std::vector< SymbolSpec >& functions() const { return _functions; }
    [[nodiscard]] const std::vector< std::string >& constants() const { return _constants; }

    [[nodiscard]] std::optional< std::size_t > predicate_index( const std::string& n ) const { return find( _predicates, n ); }
    [[nodiscard]] std::optional< std::size_t > function_index( const std::string& n ) const { return find( _functions, n ); }
    [[nodiscard]] std::optional< std::size_t > constant_index( const std::string& n ) const { return find( _constants, n ); }

    [[nodiscard]] bool contains_name( const std::string& n ) const
    {
        return predicate_index( n ) || function_index( n ) || constant_index( n );
    }

    // No function symbols; constants are allowed.
    [[nodiscard]] bool is_relational() const { return _functions.empty(); }
    [[nodiscard]] bool empty() const { return _predicates.empty() && _functions.empty() && _constants.empty(); }

    // Every symbol of `sub` occurs here with the same arity and modulus.
    [[nodiscard]] bool includes( const Signature& sub ) const
    {
        for ( const auto& p : sub._predicates )
            if ( auto i = predicate_index( p.name ); !i || _predicates[ *i ] != p )
                return false;
        for ( const auto& f : sub._functions )
            if ( auto i = function_index( f.name ); !i || _functions[ *i ] != f )
                return false;
        for ( const auto& c : sub._constants )
            if ( !constant_index( c ) )
                return false;
        return true;
    }

    // The subsignature on the given names, in this signature's order.
    [[nodiscard]] Signature restrict_to( const std::vector< std::string >& names ) const
    {
        std::set< std::string > keep( names.begin(), names.end() );
        for ( const auto& n : keep )
            if ( !contains_name( n ) )
                throw InvalidArgument( "unknown symbol '" + n + "' in subsignature" );
        Signature s;
        for ( const auto& p : _predicates )
            if ( keep.contains( p.name ) )
                s._predicates.push_back( p );
        for ( const auto& f : _functions )
            if ( keep.contains( f.name ) )
                s._functions.push_back( f );
        for ( const auto& c : _constants )
            if ( keep.contains( c ) )
                s._constants.push_back( c );
        return s;
    }

    [[nodiscard]] Signature with_constants( const std::vector< std::string >& extra ) const
    {
        auto consts = _constants;
        consts.insert( consts.end(), extra.begin(), extra.end() );
        return Signature( _predicates, _functions, std::move( consts ) );
    }

    [[nodiscard]] std::vector< std::string > names() const
    {
        std::vector< std::string > out;
        each_name( [ & ]( const std::string& n ) { out.push_back( n ); } );
        return out;
    }

    friend bool operator==( const Signature&, const Signature& ) = default;
};

} // namespace cfo
