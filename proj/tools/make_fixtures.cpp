// Writes the fixture corpus used by the test suites: make_fixtures <dir>.

#include "cfo/structures/builders.hpp"
#include "cfo/structures/io.hpp"
#include "cfo/structures/operations.hpp"
#include "cfo/structures/random.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>

using namespace cfo;

namespace
{

MetricStructure with_unary( MetricStructure s, const Signature& sig, std::initializer_list< Rational > values )
{
    MetricStructure out( sig, s.size() );
    for ( Point a = 0; a < s.size(); ++a )
        for ( Point b = 0; b < s.size(); ++b )
            out.set_distance_directed( a, b, s.dist( a, b ) );
    Point p = 0;
    for ( const auto& v : values )
        out.set_predicate( "P", { p++ }, v );
    return out;
}

} // namespace

int main( int argc, char** argv )
{
    if ( argc != 2 ) {
        std::cerr << "usage: make_fixtures <dir>\n";
        return 2;
    }
    std::filesystem::path root = argv[ 1 ];
    std::filesystem::create_directories( root / "structures" );
    std::filesystem::create_directories( root / "pairs" );
    std::map< std::string, MetricStructure > s;
    std::mt19937_64 rng( 20240601 );

    // Pure metric spaces.
    s.emplace( "point1", discrete_space( 1 ) );
    s.emplace( "discrete2", discrete_space( 2 ) );
    s.emplace( "discrete3", discrete_space( 3 ) );
    s.emplace( "discrete4", discrete_space( 4 ) );
    s.emplace( "line3", line_space( { 0, Rational( 1, 2 ), 1 } ) );
    s.emplace( "line4", line_space( { 0, Rational( 1, 4 ), Rational( 1, 2 ), 1 } ) );
    s.emplace( "line5", line_space( { 0, Rational( 1, 8 ), Rational( 3, 8 ), Rational( 3, 4 ), 1 } ) );
    s.emplace( "line6", line_space( { 0, Rational( 1, 8 ), Rational( 1, 4 ), Rational( 1, 2 ), Rational( 5, 8 ), 1 } ) );
    s.emplace( "cardinality_b", cardinality_pair( Rational( 1, 4 ) ).right() );
    {
        MetricStructure star = discrete_space( 4 );
        for ( Point p = 1; p < 4; ++p )
            star.set_distance( 0, p, Rational( 1, 2 ) );
        s.emplace( "star4", std::move( star ) );
        MetricStructure tri = discrete_space( 3 );
        tri.set_distance( 0, 1, Rational( 1, 2 ) );
        tri.set_distance( 1, 2, Rational( 1, 2 ) );
        tri.set_distance( 0, 2, Rational( 3, 4 ) );
        s.emplace( "triangle3", std::move( tri ) );
    }
    s.emplace( "far5", random_structure( {}, 5, rng, RandomOptions::Metric::Far ) );
    s.emplace( "line3_copy", relabeled_copy( s.at( "line3" ), { 2, 0, 1 } ) );
    s.emplace( "line4_copy", relabeled_copy( s.at( "line4" ), { 3, 1, 0, 2 } ) );

    // One unary predicate P with modulus min(2t, 1).
    Signature unary( { { "P", 1, PwlModulus::capped_linear( 2 ) } }, {}, {} );
    s.emplace( "u_one0", with_unary( discrete_space( 1 ), unary, { 0 } ) );
    s.emplace( "u_two01", with_unary( discrete_space( 2 ), unary, { 0, 1 } ) );
    s.emplace( "u_two0half", with_unary( discrete_space( 2 ), unary, { 0, Rational( 1, 2 ) } ) );
    s.emplace( "u_line3", with_unary( s.at( "line3" ), unary, { 0, Rational( 1, 2 ), 1 } ) );
    s.emplace( "u_line3_copy", relabeled_copy( s.at( "u_line3" ), { 1, 2, 0 } ) );
    s.emplace( "u_far4a", random_structure( unary, 4, rng, RandomOptions::Metric::Far ) );
    s.emplace( "u_far4b", random_structure( unary, 4, rng, RandomOptions::Metric::Far ) );
    s.emplace( "u_far4a_copy", relabeled_copy( s.at( "u_far4a" ), { 2, 3, 1, 0 } ) );

    // Unary P, binary R and a constant c on line metrics; moduli min(8t, 1).
    Signature rel( { { "P", 1, PwlModulus::capped_linear( 8 ) }, { "R", 2, PwlModulus::capped_linear( 8 ) } }, {}, { "c" } );
    s.emplace( "rel3a", random_structure( rel, 3, rng, RandomOptions::Metric::Line ) );
    s.emplace( "rel3b", random_structure( rel, 3, rng, RandomOptions::Metric::Line ) );
    s.emplace( "rel4", random_structure( rel, 4, rng, RandomOptions::Metric::Line ) );
    s.emplace( "rel3a_copy", relabeled_copy( s.at( "rel3a" ), { 1, 2, 0 } ) );

    // A unary function: the swap and a constant map on the 2-point space.
    Signature func( {}, { { "f", 1, PwlModulus::identity() } }, {} );
    {
        MetricStructure swap( func, 2 ), flat( func, 2 );
        swap.set_function( "f", { 0 }, 1 );
        swap.set_function( "f", { 1 }, 0 );
        s.emplace( "f_swap", std::move( swap ) );
        s.emplace( "f_const", std::move( flat ) );
    }

    for ( const auto& [ name, st ] : s ) {
        auto report = validate( st );
        if ( !report.ok() ) {
            std::cerr << name << ": " << report.to_string() << "\n";
            return 1;
        }
        save_structure( st, root / "structures" / ( name + ".json" ) );
    }

    const std::vector< std::pair< std::string, std::string > > pairs{
        { "discrete2", "cardinality_b" }, { "discrete2", "discrete3" }, { "line3", "line3_copy" },
        { "line3", "triangle3" },         { "discrete3", "star4" },     { "line4", "discrete4" },
        { "point1", "discrete2" },        { "discrete4", "discrete4" }, { "line4", "line4_copy" },
        { "star4", "line4" },             { "triangle3", "cardinality_b" },
        { "u_one0", "u_two01" },          { "u_two01", "u_two0half" },  { "u_line3", "u_line3_copy" },
        { "u_far4a", "u_far4a_copy" },    { "u_far4a", "u_far4b" },     { "u_two01", "u_line3" },
        { "rel3a", "rel3a_copy" },        { "rel3a", "rel3b" },         { "rel3b", "rel4" },
        { "rel3a", "rel4" },              { "f_swap", "f_const" } };
    for ( const auto& [ l, r ] : pairs ) {
        Json j{ { "left", "../structures/" + l + ".json" }, { "right", "../structures/" + r + ".json" } };
        write_json_file( root / "pairs" / ( l + "__" + r + ".json" ), j );
    }

    MetricStructure bad = discrete_space( 3 );
    bad.set_distance( 0, 1, Rational( 1, 4 ) );
    bad.set_distance( 1, 2, Rational( 1, 4 ) );
    save_structure( bad, root / "bad.json" );
    std::cout << s.size() << " structures, " << pairs.size() << " pairs\n";
    return 0;
}
