#pragma once

#include "cfo/error.hpp"
#include "cfo/numerics/modulus.hpp"
#include "cfo/numerics/rational.hpp"
#include "cfo/numerics/weak_modulus.hpp"

#include <json.hpp>

namespace cfo
{

using Json = nlohmann::ordered_json;

inline Json to_json( const Rational& r ) { return Json::array( { r.num(), r.den() } ); }

// Accepts [num, den], an integer, or a string "p/q" / decimal.
inline Rational rational_from_json( const Json& j )
{
    if ( j.is_array() ) {
        if ( j.size() != 2 || !j[ 0 ].is_number_integer() || !j[ 1 ].is_number_integer() )
            throw InvalidArgument( "rational must be [num, den], got " + j.dump() );
        return Rational( j[ 0 ].get< std::int64_t >(), j[ 1 ].get< std::int64_t >() );
    }
    if ( j.is_number_integer() )
        return Rational( j.get< std::int64_t >() );
    if ( j.is_string() )
        return Rational::parse( j.get< std::string >() );
    throw InvalidArgument( "expected a rational, got " + j.dump() );
}

inline Json to_json( const PwlModulus& m )
{
    Json bps = Json::array();
    for ( const auto& p : m.breakpoints() )
        bps.push_back( Json::array( { to_json( p.x ), to_json( p.y ) } ) );
    return Json{ { "breakpoints", bps }, { "final_slope", to_json( m.final_slope() ) } };
}

inline PwlModulus modulus_from_json( const Json& j )
{
    if ( j.is_string() ) {
        auto s = j.get< std::string >();
        if ( s == "identity" || s == "id" )
            return PwlModulus::identity();
        if ( s == "zero" )
            return PwlModulus::zero();
        throw InvalidArgument( "unknown modulus name '" + s + "'" );
    }
    if ( !j.is_object() || !j.contains( "breakpoints" ) )
        throw InvalidArgument( "modulus must be an object with \"breakpoints\"" );
    std::vector< PwlModulus::Point > pts;
    for ( const auto& bp : j.at( "breakpoints" ) ) {
        if ( !bp.is_array() || bp.size() != 2 )
            throw InvalidArgument( "modulus breakpoint must be [x, y], got " + bp.dump() );
        pts.push_back( { rational_from_json( bp[ 0 ] ), rational_from_json( bp[ 1 ] ) } );
    }
    Rational slope = j.contains( "final_slope" ) ? rational_from_json( j.at( "final_slope" ) ) : Rational{ 0 };
    return PwlModulus( std::move( pts ), slope );
}

inline Json to_json( const CoordinateModulus& c ) { return c.is_rigid() ? Json( "inf" ) : to_json( c.modulus() ); }

inline CoordinateModulus coordinate_from_json( const Json& j )
{
    if ( j.is_string() && ( j.get< std::string >() == "inf" || j.get< std::string >() == "rigid" ) )
        return CoordinateModulus::rigid();
    return modulus_from_json( j );
}

inline Json to_json( const WeakModulus& w )
{
    Json coords = Json::array();
    for ( const auto& c : w.explicit_coordinates() )
        coords.push_back( to_json( c ) );
    const char* scale = "constant";
    if ( w.tail().scale == TailRule::Scale::Index )
        scale = "index";
    else if ( w.tail().scale == TailRule::Scale::InverseIndex )
        scale = "inverse_index";
    return Json{ { "coords", coords },
                 { "tail", Json{ { "base", to_json( w.tail().base ) }, { "scale", scale } } },
                 { "aggregator", w.aggregator() == Aggregator::Max ? "max" : "sum" },
                 { "allow_infinite", w.allow_infinite() } };
}

inline WeakModulus weak_modulus_from_json( const Json& j )
{
    if ( !j.is_object() )
        throw InvalidArgument( "weak modulus must be a JSON object" );
    std::vector< CoordinateModulus > coords;
    if ( j.contains( "coords" ) )
        for ( const auto& c : j.at( "coords" ) )
            coords.push_back( coordinate_from_json( c ) );
    TailRule tail;
    if ( j.contains( "tail" ) ) {
        const auto& t = j.at( "tail" );
        if ( t.is_object() && t.contains( "base" ) ) {
            tail.base = coordinate_from_json( t.at( "base" ) );
            auto scale = t.value( "scale", std::string( "constant" ) );
            if ( scale == "index" )
                tail.scale = TailRule::Scale::Index;
            else if ( scale == "inverse_index" )
                tail.scale = TailRule::Scale::InverseIndex;
            else if ( scale != "constant" )
                throw InvalidArgument( "unknown tail scale '" + scale + "'" );
        }
        else
            tail.base = coordinate_from_json( t );
    }
    auto agg = j.value( "aggregator", std::string( "max" ) );
    if ( agg != "max" && agg != "sum" )
        throw InvalidArgument( "aggregator must be \"max\" or \"sum\", got '" + agg + "'" );
    return WeakModulus( std::move( coords ), std::move( tail ), agg == "max" ? Aggregator::Max : Aggregator::Sum,
                        j.value( "allow_infinite", false ) );
}

} // namespace cfo
