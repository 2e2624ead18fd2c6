#pragma once

#include "cfo/game/solver.hpp"
#include "cfo/numerics/json.hpp"

#include <memory>

namespace cfo
{

inline Json to_json( Side s ) { return side_name( s ); }

inline Side side_from_json( const Json& j )
{
    auto s = j.get< std::string >();
    if ( s == "left" )
        return Side::Left;
    if ( s == "right" )
        return Side::Right;
    throw InvalidArgument( "side must be \"left\" or \"right\", got \"" + s + "\"" );
}

inline Json to_json( const Position& p ) { return Json{ { "left", p.left }, { "right", p.right } }; }

inline Position position_from_json( const Json& j )
{
    return Position{ j.at( "left" ).get< std::vector< Point > >(), j.at( "right" ).get< std::vector< Point > >() };
}

// {"branches": [{"side", "move", "reply", "next"}]}
inline Json to_json( const MoveTree& t )
{
    Json branches = Json::array();
    for ( const auto& b : t.branches ) {
        Json e{ { "side", to_json( b.side ) }, { "move", b.move }, { "reply", b.reply } };
        if ( b.next && !b.next->branches.empty() )
            e[ "next" ] = to_json( *b.next );
        branches.push_back( std::move( e ) );
    }
    return Json{ { "branches", std::move( branches ) } };
}

inline std::shared_ptr< const MoveTree > move_tree_from_json( const Json& j )
{
    auto t = std::make_shared< MoveTree >();
    for ( const auto& e : j.at( "branches" ) )
        t->branches.push_back( { side_from_json( e.at( "side" ) ), e.at( "move" ).get< Point >(), e.at( "reply" ).get< Point >(),
                                 e.contains( "next" ) ? move_tree_from_json( e.at( "next" ) ) : std::make_shared< MoveTree >() } );
    return t;
}

// {"side", "move", "replies": [{"reply", "next"}]}
inline Json to_json( const SpoilerTree& t )
{
    Json replies = Json::array();
    for ( const auto& [ r, next ] : t.replies ) {
        Json e{ { "reply", r } };
        if ( next )
            e[ "next" ] = to_json( *next );
        replies.push_back( std::move( e ) );
    }
    return Json{ { "side", to_json( t.side ) }, { "move", t.move }, { "replies", std::move( replies ) } };
}

inline std::shared_ptr< const SpoilerTree > spoiler_tree_from_json( const Json& j )
{
    auto t = std::make_shared< SpoilerTree >();
    t->side = side_from_json( j.at( "side" ) );
    t->move = j.at( "move" ).get< Point >();
    for ( const auto& e : j.at( "replies" ) )
        t->replies.emplace_back( e.at( "reply" ).get< Point >(), e.contains( "next" ) ? spoiler_tree_from_json( e.at( "next" ) ) : nullptr );
    return t;
}

inline Json to_json( const GameValueResult& r )
{
    Json j{ { "value", to_json( r.value ) },
            { "value_text", r.value.to_string() },
            { "rounds", r.rounds },
            { "term_depth", r.term_depth },
            { "leaf", r.leaf },
            { "set_abstraction", r.set_abstraction },
            { "positions", r.positions } };
    if ( r.ii_strategy )
        j[ "ii_strategy" ] = to_json( *r.ii_strategy );
    if ( r.i_witness )
        j[ "i_witness" ] = to_json( *r.i_witness );
    return j;
}

} // namespace cfo
