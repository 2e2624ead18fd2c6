#pragma once

#include "cfo/game/solver.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

namespace cfo
{

enum class Player
{
    I,
    II
};

struct PlayResult
{
    Position position;
    Rational leaf{ 0 };
    bool ii_wins = false;
    // False when input ended before the play did.
    bool complete = true;
};

namespace detail
{

inline std::optional< Point > parse_point( const std::string& word, const MetricStructure& s )
{
    if ( !word.empty() && word.find_first_not_of( "0123456789" ) == std::string::npos ) {
        auto p = std::stoull( word );
        if ( p < s.size() )
            return static_cast< Point >( p );
        return std::nullopt;
    }
    for ( Point p = 0; p < s.size(); ++p )
        if ( s.label( p ) == word )
            return p;
    return std::nullopt;
}

inline std::optional< Side > parse_side( const std::string& word )
{
    if ( word == "L" || word == "l" || word == "left" )
        return Side::Left;
    if ( word == "R" || word == "r" || word == "right" )
        return Side::Right;
    return std::nullopt;
}

} // namespace detail

/*
 * Terminal play of the n-round eps-game. The human takes one side and the
 * solver plays the other optimally. As I the human enters "<L|R> <point>", as
 * II just "<point>"; points are indices or labels. Malformed moves are
 * re-prompted without changing the play.
 */
inline PlayResult play_interactive( const NamedPair& pair, std::size_t rounds, const Rational& eps, Player human,
                                    std::istream& in, std::ostream& out, std::size_t term_depth = 0, const GameOptions& opts = {} )
{
    AtomicLeaf leaf( pair, term_depth );
    GameSolver solver( pair, leaf, opts );
    PlayResult result;
    auto structure = [ & ]( Side s ) -> const MetricStructure& { return s == Side::Left ? pair.left() : pair.right(); };
    auto read_line = [ & ]( std::string& line ) {
        out << "> " << std::flush;
        return static_cast< bool >( std::getline( in, line ) );
    };
    out << "game: " << rounds << " rounds, eps = " << eps << ", you are " << ( human == Player::I ? "I" : "II" ) << "\n";
    Position& p = result.position;
    for ( std::size_t round = 0; round < rounds; ++round ) {
        std::size_t left = rounds - round;
        Side side;
        Point x;
        if ( human == Player::I ) {
            out << "round " << round + 1 << ": your move, <L|R> <point>\n";
            for ( ;; ) {
                std::string line;
                if ( !read_line( line ) ) {
                    result.complete = false;
                    return result;
                }
                std::istringstream words( line );
                std::string s, pt;
                words >> s >> pt;
                auto ps = detail::parse_side( s );
                if ( !ps ) {
                    out << "expected L or R, then a point\n";
                    continue;
                }
                auto px = detail::parse_point( pt, structure( *ps ) );
                if ( !px ) {
                    out << "'" << pt << "' is not a point of the " << side_name( *ps ) << " structure\n";
                    continue;
                }
                side = *ps;
                x = *px;
                break;
            }
        }
        else {
            std::tie( side, x ) = solver.best_move( p, left );
            out << "round " << round + 1 << ": I plays " << structure( side ).label( x ) << " in the " << side_name( side )
                << " structure\n";
        }
        Point y;
        if ( human == Player::II ) {
            out << "your answer in the " << side_name( other( side ) ) << " structure:\n";
            for ( ;; ) {
                std::string line;
                if ( !read_line( line ) ) {
                    result.complete = false;
                    return result;
                }
                std::istringstream words( line );
                std::string pt;
                words >> pt;
                auto py = detail::parse_point( pt, structure( other( side ) ) );
                if ( !py ) {
                    out << "'" << pt << "' is not a point of the " << side_name( other( side ) ) << " structure\n";
                    continue;
                }
                y = *py;
                break;
            }
        }
        else {
            y = solver.best_reply( p, left, side, x );
            out << "II answers " << structure( other( side ) ).label( y ) << "\n";
        }
        p = side == Side::Left ? p.extended( x, y ) : p.extended( y, x );
    }
    result.leaf = leaf.value( p );
    result.ii_wins = result.leaf <= eps;
    out << "final discrepancy " << result.leaf << "\n";
    out << ( result.ii_wins ? "II wins" : "I wins" ) << " at ε=" << eps << "\n";
    return result;
}

} // namespace cfo
