#pragma once

#include "cfo/formula/semantics.hpp"
#include "cfo/numerics/modulus.hpp"
#include "cfo/numerics/rational.hpp"
#include "cfo/structures/io.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cfo::testing
{

inline std::string fixture( const std::string& name ) { return std::string( CFO_FIXTURE_DIR ) + "/" + name; }

inline Rational random_rational( std::mt19937_64& rng, std::int64_t max_num, std::int64_t max_den )
{
    auto den = static_cast< std::int64_t >( rng() % static_cast< std::uint64_t >( max_den ) ) + 1;
    auto num = static_cast< std::int64_t >( rng() % static_cast< std::uint64_t >( max_num + 1 ) );
    return Rational( num, den );
}

// A random canonical modulus: up to four segments with non-increasing slopes.
inline PwlModulus random_modulus( std::mt19937_64& rng )
{
    std::vector< PwlModulus::Point > pts{ { 0, 0 } };
    std::size_t segments = rng() % 4;
    Rational slope = random_rational( rng, 12, 4 );
    std::vector< Rational > slopes;
    for ( std::size_t i = 0; i <= segments; ++i ) {
        slopes.push_back( slope );
        slope = slope * Rational( static_cast< std::int64_t >( rng() % 4 ), 4 );
    }
    for ( std::size_t i = 0; i < segments; ++i ) {
        Rational len = random_rational( rng, 4, 4 ) + Rational( 1, 8 );
        pts.push_back( { pts.back().x + len, pts.back().y + slopes[ i ] * len } );
    }
    return PwlModulus( std::move( pts ), slopes.back() );
}

// Every structure fixture, keyed by file stem.
inline std::map< std::string, MetricStructure > fixture_structures()
{
    std::map< std::string, MetricStructure > out;
    for ( const auto& e : std::filesystem::directory_iterator( fixture( "structures" ) ) )
        out.emplace( e.path().stem().string(), load_structure( e.path() ) );
    return out;
}

// Assignment width covering every variable index that occurs in f.
inline std::size_t variable_width( const Formula& f )
{
    std::size_t w = f.is_quantifier() ? f.var + 1 : 0;
    for ( std::size_t v : free_variables( f ) )
        w = std::max( w, v + 1 );
    for ( const auto& c : f.children )
        w = std::max( w, variable_width( c ) );
    return w;
}

inline Assignment random_assignment( std::size_t width, std::size_t n, std::mt19937_64& rng )
{
    Assignment a( width );
    for ( auto& p : a )
        p = rng() % n;
    return a;
}

// Changes one distance or one predicate entry so that some condition fails.
inline MetricStructure perturb( const MetricStructure& s, std::mt19937_64& rng )
{
    MetricStructure out = s;
    const std::size_t n = s.size();
    const auto& preds = s.signature().predicates();
    bool table = !preds.empty() && rng() % 2 == 0;
    if ( n < 2 )
        table = true;
    if ( table && !preds.empty() ) {
        std::size_t pi = rng() % preds.size();
        const auto& spec = preds[ pi ];
        std::size_t count = cfo::detail::int_pow( n, spec.arity );
        std::size_t i = rng() % count;
        auto x = cfo::detail::tuple_at( i, n, spec.arity );
        for ( std::size_t j = 0; j < count; ++j ) {
            if ( j == i )
                continue;
            auto y = cfo::detail::tuple_at( j, n, spec.arity );
            Rational t = 0;
            for ( std::size_t k = 0; k < x.size(); ++k )
                t = std::max( t, s.dist( x[ k ], y[ k ] ) );
            Rational bound = spec.modulus( t );
            Rational py = s.predicate( pi, y );
            if ( py + bound + Rational( 1, 16 ) <= 1 ) {
                out.set_predicate( spec.name, x, py + bound + Rational( 1, 16 ) );
                return out;
            }
            if ( py - bound - Rational( 1, 16 ) >= 0 ) {
                out.set_predicate( spec.name, x, py - bound - Rational( 1, 16 ) );
                return out;
            }
        }
        out.set_predicate( spec.name, x, rng() % 2 ? Rational( 5, 4 ) : Rational( -1, 4 ) );
        return out;
    }
    if ( n < 2 ) {
        out.set_distance( 0, 0, Rational( 1, 2 ) );
        return out;
    }
    Point a = rng() % n, b = ( a + 1 + rng() % ( n - 1 ) ) % n;
    switch ( rng() % 3 ) {
        case 0: out.set_distance( a, b, 0 ); return out;
        case 1: out.set_distance( a, b, Rational( 9, 8 ) ); return out;
        default:
            for ( Point c = 0; c < n; ++c ) {
                Rational via = s.dist( a, c ) + s.dist( c, b );
                if ( c != a && c != b && via + Rational( 1, 16 ) <= 1 ) {
                    out.set_distance( a, b, via + Rational( 1, 16 ) );
                    return out;
                }
            }
            out.set_distance_directed( a, b, s.dist( a, b ) / 2 );
            return out;
    }
}

} // namespace cfo::testing
