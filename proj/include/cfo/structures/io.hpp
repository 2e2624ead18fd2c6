#pragma once

#include "cfo/numerics/json.hpp"
#include "cfo/structures/pair.hpp"
#include "cfo/structures/structure.hpp"
#include "cfo/structures/validate.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cfo
{

inline Json to_json( const Signature& sig )
{
    auto symbols = []( const std::vector< SymbolSpec >& v ) {
        Json arr = Json::array();
        for ( const auto& s : v )
            arr.push_back( Json{ { "name", s.name }, { "arity", s.arity }, { "modulus", to_json( s.modulus ) } } );
        return arr;
    };
    return Json{ { "predicates", symbols( sig.predicates() ) },
                 { "functions", symbols( sig.functions() ) },
                 { "constants", sig.constants() } };
}

inline Signature signature_from_json( const Json& j )
{
    auto symbols = [ & ]( const char* key ) {
        std::vector< SymbolSpec > out;
        if ( !j.contains( key ) )
            return out;
        for ( const auto& s : j.at( key ) ) {
            SymbolSpec spec;
            spec.name = s.at( "name" ).get< std::string >();
            spec.arity = s.at( "arity" ).get< std::size_t >();
            spec.modulus = s.contains( "modulus" ) ? modulus_from_json( s.at( "modulus" ) ) : PwlModulus::identity();
            out.push_back( std::move( spec ) );
        }
        return out;
    };
    std::vector< std::string > consts;
    if ( j.contains( "constants" ) )
        consts = j.at( "constants" ).get< std::vector< std::string > >();
    return Signature( symbols( "predicates" ), symbols( "functions" ), std::move( consts ) );
}

namespace detail
{

inline Tuple parse_tuple_key( const std::string& key, std::size_t arity, std::size_t n )
{
    auto bad = [ & ] { return InvalidArgument( "bad tuple key '" + key + "' (expected arity " + std::to_string( arity ) + ")" ); };
    if ( key.size() < 2 || key.front() != '(' || key.back() != ')' )
        throw bad();
    Tuple t;
    std::string body = key.substr( 1, key.size() - 2 );
    std::stringstream ss( body );
    std::string item;
    while ( std::getline( ss, item, ',' ) ) {
        auto b = item.find_first_not_of( ' ' ), e = item.find_last_not_of( ' ' );
        if ( b == std::string::npos )
            throw bad();
        item = item.substr( b, e - b + 1 );
        if ( !std::all_of( item.begin(), item.end(), []( unsigned char ch ) { return std::isdigit( ch ); } ) )
            throw bad();
        Point p = std::stoull( item );
        if ( p >= n )
            throw InvalidArgument( "tuple key '" + key + "' names a point outside the domain" );
        t.push_back( p );
    }
    if ( t.size() != arity )
        throw bad();
    return t;
}

// A point reference: an index, or a label.
inline Point point_from_json( const Json& j, const MetricStructure& s )
{
    if ( j.is_number_integer() ) {
        auto v = j.get< std::int64_t >();
        if ( v < 0 || static_cast< std::size_t >( v ) >= s.size() )
            throw InvalidArgument( "point index " + std::to_string( v ) + " outside the domain" );
        return static_cast< Point >( v );
    }
    if ( j.is_string() ) {
        const auto& labels = s.labels();
        auto it = std::find( labels.begin(), labels.end(), j.get< std::string >() );
        if ( it == labels.end() )
            throw InvalidArgument( "unknown point label '" + j.get< std::string >() + "'" );
        return static_cast< Point >( it - labels.begin() );
    }
    throw InvalidArgument( "point reference must be an index or a label, got " + j.dump() );
}

} // namespace detail

inline Json to_json( const MetricStructure& s )
{
    const std::size_t n = s.size();
    Json dist = Json::array();
    for ( Point a = 0; a < n; ++a ) {
        Json row = Json::array();
        for ( Point b = 0; b < n; ++b )
            row.push_back( to_json( s.dist( a, b ) ) );
        dist.push_back( row );
    }
    const auto& sig = s.signature();
    Json preds = Json::object();
    for ( std::size_t i = 0; i < sig.predicates().size(); ++i ) {
        Json table = Json::object();
        const auto& v = s.predicate_table( i );
        for ( std::size_t k = 0; k < v.size(); ++k )
            table[ detail::tuple_key( detail::tuple_at( k, n, sig.predicates()[ i ].arity ) ) ] = to_json( v[ k ] );
        preds[ sig.predicates()[ i ].name ] = table;
    }
    Json funcs = Json::object();
    for ( std::size_t i = 0; i < sig.functions().size(); ++i ) {
        Json table = Json::object();
        const auto& v = s.function_table( i );
        for ( std::size_t k = 0; k < v.size(); ++k )
            table[ detail::tuple_key( detail::tuple_at( k, n, sig.functions()[ i ].arity ) ) ] = v[ k ];
        funcs[ sig.functions()[ i ].name ] = table;
    }
    Json consts = Json::object();
    for ( std::size_t i = 0; i < sig.constants().size(); ++i )
        consts[ sig.constants()[ i ] ] = s.constant( i );
    Json j{ { "signature", to_json( sig ) }, { "points", s.labels() }, { "dist", dist },
            { "predicates", preds }, { "functions", funcs }, { "constants", consts } };
    if ( s.pseudometric() )
        j[ "pseudometric" ] = true;
    return j;
}

// Builds the structure without validating it.
inline MetricStructure structure_from_json( const Json& j )
{
    if ( !j.is_object() )
        throw InvalidArgument( "structure must be a JSON object" );
    Signature sig = j.contains( "signature" ) ? signature_from_json( j.at( "signature" ) ) : Signature{};
    const auto& points = j.at( "points" );
    if ( !points.is_array() || points.empty() )
        throw InvalidArgument( "\"points\" must be a non-empty array" );
    MetricStructure s( sig, points.size() );
    for ( std::size_t i = 0; i < points.size(); ++i )
        s.set_label( i, points[ i ].is_string() ? points[ i ].get< std::string >() : points[ i ].dump() );
    s.set_pseudometric( j.value( "pseudometric", false ) );

    const auto& dist = j.at( "dist" );
    if ( !dist.is_array() || dist.size() != s.size() )
        throw InvalidArgument( "\"dist\" must be a " + std::to_string( s.size() ) + "x" + std::to_string( s.size() ) + " matrix" );
    for ( std::size_t a = 0; a < s.size(); ++a ) {
        if ( !dist[ a ].is_array() || dist[ a ].size() != s.size() )
            throw InvalidArgument( "\"dist\" row " + std::to_string( a ) + " has the wrong length" );
        for ( std::size_t b = 0; b < s.size(); ++b )
            s.set_distance_directed( a, b, rational_from_json( dist[ a ][ b ] ) );
    }

    const std::size_t n = s.size();
    auto fill = [ & ]( const char* key, const std::vector< SymbolSpec >& specs, auto&& set ) {
        const Json empty = Json::object();
        const Json& tables = j.contains( key ) ? j.at( key ) : empty;
        for ( auto it = tables.begin(); it != tables.end(); ++it ) {
            bool known = std::any_of( specs.begin(), specs.end(), [ & ]( const SymbolSpec& sp ) { return sp.name == it.key(); } );
            if ( !known )
                throw InvalidArgument( std::string( key ) + " table for undeclared symbol '" + it.key() + "'" );
        }
        for ( const auto& spec : specs ) {
            if ( !tables.contains( spec.name ) )
                throw InvalidArgument( "missing table for '" + spec.name + "'" );
            const auto& table = tables.at( spec.name );
            std::size_t expected = detail::int_pow( n, spec.arity );
            if ( table.size() != expected )
                throw InvalidArgument( "table for '" + spec.name + "' has " + std::to_string( table.size() ) +
                                       " entries, expected " + std::to_string( expected ) );
            for ( auto it = table.begin(); it != table.end(); ++it )
                set( spec.name, detail::parse_tuple_key( it.key(), spec.arity, n ), it.value() );
        }
    };
    fill( "predicates", sig.predicates(),
          [ & ]( const std::string& name, const Tuple& t, const Json& v ) { s.set_predicate( name, t, rational_from_json( v ) ); } );
    fill( "functions", sig.functions(), [ & ]( const std::string& name, const Tuple& t, const Json& v ) {
        s.set_function( name, t, detail::point_from_json( v, s ) );
    } );
    if ( j.contains( "constants" ) )
        for ( auto it = j.at( "constants" ).begin(); it != j.at( "constants" ).end(); ++it ) {
            if ( !sig.constant_index( it.key() ) )
                throw InvalidArgument( "interpretation for undeclared constant '" + it.key() + "'" );
            s.set_constant( it.key(), detail::point_from_json( it.value(), s ) );
        }
    for ( const auto& c : sig.constants() )
        if ( !j.contains( "constants" ) || !j.at( "constants" ).contains( c ) )
            throw InvalidArgument( "missing interpretation for constant '" + c + "'" );
    return s;
}

// A structure that fails validation.
class ValidationError : public Error
{
    ValidationReport _report;

public:
    explicit ValidationError( ValidationReport report )
        : Error( "invalid structure: " + report.to_string() ), _report{ std::move( report ) } {}
    [[nodiscard]] const ValidationReport& report() const { return _report; }
};

struct LoadOptions
{
    bool validate = true;
};

inline MetricStructure checked( MetricStructure s, const LoadOptions& opts )
{
    if ( opts.validate ) {
        auto rep = validate( s );
        if ( !rep.ok() )
            throw ValidationError( std::move( rep ) );
    }
    return s;
}

inline Json read_json_file( const std::filesystem::path& path )
{
    std::ifstream in( path );
    if ( !in )
        throw InvalidArgument( "cannot open '" + path.string() + "'" );
    try {
        return Json::parse( in );
    }
    catch ( const nlohmann::json::parse_error& e ) {
        throw InvalidArgument( "malformed JSON in '" + path.string() + "': " + e.what() );
    }
}

inline void write_json_file( const std::filesystem::path& path, const Json& j )
{
    std::ofstream out( path );
    if ( !out )
        throw InvalidArgument( "cannot write '" + path.string() + "'" );
    out << j.dump( 2 ) << "\n";
}

inline MetricStructure load_structure( const std::filesystem::path& path, const LoadOptions& opts = {} )
{
    try {
        return checked( structure_from_json( read_json_file( path ) ), opts );
    }
    catch ( const nlohmann::json::exception& e ) {
        throw InvalidArgument( "malformed structure file '" + path.string() + "': " + e.what() );
    }
}

inline void save_structure( const MetricStructure& s, const std::filesystem::path& path ) { write_json_file( path, to_json( s ) ); }

inline Json to_json( const NamedPair& p ) { return Json{ { "left", to_json( p.left() ) }, { "right", to_json( p.right() ) } }; }

// {"left": ..., "right": ...}; each side inline or a path relative to `base`.
inline NamedPair pair_from_json( const Json& j, const std::filesystem::path& base = {}, const LoadOptions& opts = {} )
{
    if ( !j.is_object() || !j.contains( "left" ) || !j.contains( "right" ) )
        throw InvalidArgument( "pair must be an object with \"left\" and \"right\"" );
    auto side = [ & ]( const Json& v ) {
        if ( v.is_string() )
            return load_structure( base / v.get< std::string >(), opts );
        return checked( structure_from_json( v ), opts );
    };
    return NamedPair( side( j.at( "left" ) ), side( j.at( "right" ) ) );
}

inline NamedPair load_pair( const std::filesystem::path& path, const LoadOptions& opts = {} )
{
    try {
        return pair_from_json( read_json_file( path ), path.parent_path(), opts );
    }
    catch ( const nlohmann::json::exception& e ) {
        throw InvalidArgument( "malformed pair file '" + path.string() + "': " + e.what() );
    }
}

inline void save_pair( const NamedPair& p, const std::filesystem::path& path ) { write_json_file( path, to_json( p ) ); }

} // namespace cfo
