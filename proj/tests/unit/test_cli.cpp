#include "cfo/cli/app.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace cfo;
using cfo::testing::fixture;

namespace
{

struct Outcome
{
    int code = -1;
    std::string out;
    std::string err;
};

Outcome invoke( std::vector< std::string > args, const std::string& input = "" )
{
    args.insert( args.begin(), "cfo" );
    std::vector< const char* > argv;
    for ( const auto& a : args )
        argv.push_back( a.c_str() );
    std::istringstream in( input );
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run( static_cast< int >( argv.size() ), argv.data(), in, out, err );
    o.out = out.str();
    o.err = err.str();
    return o;
}

bool contains( const std::string& hay, const std::string& needle ) { return hay.find( needle ) != std::string::npos; }

std::filesystem::path scratch( const std::string& name )
{
    auto dir = std::filesystem::temp_directory_path() / "cfo_cli_test";
    std::filesystem::create_directories( dir );
    return dir / name;
}

// Covering radius over center sets drawn as bitmasks; repeated centers never help.
Rational covering_by_subsets( const MetricStructure& s, std::size_t n )
{
    const std::size_t size = s.size();
    std::optional< Rational > best;
    for ( std::uint32_t mask = 1; mask < ( 1u << size ); ++mask ) {
        if ( static_cast< std::size_t >( __builtin_popcount( mask ) ) > n )
            continue;
        Rational radius{ 0 };
        for ( Point y = 0; y < size; ++y ) {
            std::optional< Rational > nearest;
            for ( Point c = 0; c < size; ++c )
                if ( mask >> c & 1 )
                    nearest = nearest ? std::min( *nearest, s.dist( y, c ) ) : s.dist( y, c );
            radius = std::max( radius, *nearest );
        }
        best = best ? std::min( *best, radius ) : radius;
    }
    return *best;
}

} // namespace

TEST( Cli, EvalExample )
{
    auto o = invoke( { "eval", "--structure", fixture( "structures/discrete2.json" ), "--formula", "inf x0. sup y. d(y,x0)" } );
    EXPECT_EQ( o.code, 0 ) << o.err;
    EXPECT_EQ( o.out, "1\n" );

    auto j = invoke( { "--json", "eval", "--structure", fixture( "structures/discrete2.json" ), "--formula", "inf x0. sup y. d(y,x0)" } );
    EXPECT_EQ( j.code, 0 );
    EXPECT_EQ( rational_from_json( Json::parse( j.out ).at( "value" ) ), Rational( 1 ) );
}

TEST( Cli, EvalWithAssignment )
{
    auto s = fixture( "structures/line3.json" );
    auto structure = load_structure( s );
    auto o = invoke( { "eval", "--structure", s, "--formula", "d(x0,x1)", "--assign", "0,2" } );
    EXPECT_EQ( o.code, 0 ) << o.err;
    EXPECT_EQ( o.out, structure.dist( 0, 2 ).to_string() + "\n" );

    auto missing = invoke( { "eval", "--structure", s, "--formula", "d(x0,x1)", "--assign", "0" } );
    EXPECT_EQ( missing.code, 2 );
    EXPECT_TRUE( contains( missing.err, "x1" ) );
}

TEST( Cli, ValidateExample )
{
    auto o = invoke( { "validate", fixture( "bad.json" ) } );
    EXPECT_EQ( o.code, 1 );
    EXPECT_TRUE( contains( o.out, "triangle-inequality" ) ) << o.out;
    EXPECT_TRUE( contains( o.out, "witness (0,1,2)" ) ) << o.out;

    auto ok = invoke( { "validate", fixture( "structures/line4.json" ) } );
    EXPECT_EQ( ok.code, 0 );
    EXPECT_TRUE( contains( ok.out, "valid" ) );

    auto pair = invoke( { "--json", "validate", "--pair", fixture( "pairs/rel3a__rel4.json" ) } );
    EXPECT_EQ( pair.code, 0 );
    auto j = Json::parse( pair.out );
    EXPECT_TRUE( j.at( "left" ).at( "ok" ).get< bool >() );
    EXPECT_TRUE( j.at( "right" ).at( "ok" ).get< bool >() );
}

TEST( Cli, UsageErrors )
{
    EXPECT_EQ( invoke( {} ).code, 2 );
    EXPECT_EQ( invoke( { "frobnicate" } ).code, 2 );
    EXPECT_EQ( invoke( { "demo", "bogus" } ).code, 2 );
    EXPECT_EQ( invoke( { "game", "--pair", fixture( "pairs/discrete2__discrete3.json" ), "--rounds", "1", "--bogus" } ).code, 2 );
    auto missing = invoke( { "game", "--pair", "no/such/pair.json", "--rounds", "1" } );
    EXPECT_EQ( missing.code, 2 );
    EXPECT_TRUE( contains( missing.err, "no such file" ) );
    auto syntax = invoke( { "eval", "--structure", fixture( "structures/discrete2.json" ), "--formula", "d(x0," } );
    EXPECT_EQ( syntax.code, 2 );
    EXPECT_TRUE( contains( syntax.err, "position" ) );
    EXPECT_EQ( invoke( { "game", "--pair", fixture( "pairs/discrete2__discrete3.json" ), "--rounds", "1", "--epsilon", "x" } ).code, 2 );
    EXPECT_EQ( invoke( { "ralpha", "--pair", fixture( "pairs/discrete2__discrete3.json" ), "--alpha", "two" } ).code, 2 );
    EXPECT_EQ( invoke( { "ralpha", "--pair", fixture( "pairs/discrete2__discrete3.json" ), "--leaf", "omega" } ).code, 2 );
    EXPECT_EQ( invoke( { "--help" } ).code, 0 );
}

TEST( Cli, InvalidPairIsADomainError )
{
    auto path = scratch( "bad_pair.json" );
    write_json_file( path, Json{ { "left", fixture( "bad.json" ) }, { "right", fixture( "bad.json" ) } } );
    auto o = invoke( { "game", "--pair", path.string(), "--rounds", "1" } );
    EXPECT_EQ( o.code, 1 );
    EXPECT_TRUE( contains( o.err, "triangle-inequality" ) );
}

TEST( Cli, ResourceCapIsActionable )
{
    auto args = std::vector< std::string >{ "game", "--pair", fixture( "pairs/discrete4__discrete4.json" ), "--rounds", "3" };
    auto flag = args;
    flag.insert( flag.begin(), { "--max-positions", "5" } );
    auto o = invoke( flag );
    EXPECT_EQ( o.code, 1 );
    EXPECT_TRUE( contains( o.err, "--max-positions=5" ) ) << o.err;

    ::setenv( "CFO_MAX_POSITIONS", "7", 1 );
    auto env = invoke( args );
    EXPECT_EQ( env.code, 1 );
    EXPECT_TRUE( contains( env.err, "--max-positions=7" ) ) << env.err;
    ::setenv( "CFO_MAX_POSITIONS", "lots", 1 );
    EXPECT_EQ( invoke( args ).code, 2 );
    ::unsetenv( "CFO_MAX_POSITIONS" );
    EXPECT_EQ( invoke( args ).code, 0 );
}

TEST( Cli, GameReportsValueAndWinner )
{
    auto pair_path = fixture( "pairs/discrete2__cardinality_b.json" );
    auto pair = load_pair( pair_path );
    auto expected = game_value( pair, 2 ).value;

    auto o = invoke( { "game", "--pair", pair_path, "--rounds", "2", "--epsilon", "1/4" } );
    EXPECT_EQ( o.code, 0 );
    EXPECT_TRUE( contains( o.out, "game value " + expected.to_string() ) ) << o.out;
    EXPECT_TRUE( contains( o.out, "II wins at ε=1/4" ) ) << o.out;

    auto lose = invoke( { "game", "--pair", pair_path, "--rounds", "2", "--epsilon", "1/16" } );
    EXPECT_TRUE( contains( lose.out, "I wins at ε=1/16" ) ) << lose.out;

    auto j = invoke( { "--json", "game", "--pair", pair_path, "--rounds", "2" } );
    EXPECT_EQ( rational_from_json( Json::parse( j.out ).at( "value" ) ), expected );
}

TEST( Cli, StrategyFilesReplay )
{
    auto pair_path = fixture( "pairs/discrete2__cardinality_b.json" );
    auto pair = load_pair( pair_path );
    AtomicLeaf leaf( pair );
    auto value = game_value( pair, 2 ).value;

    auto win = scratch( "ii.json" );
    ASSERT_EQ( invoke( { "game", "--pair", pair_path, "--rounds", "2", "--epsilon", "1/4", "--strategy", win.string() } ).code, 0 );
    auto wj = read_json_file( win );
    ASSERT_TRUE( wj.at( "ii_wins" ).get< bool >() );
    auto tree = move_tree_from_json( wj.at( "ii_strategy" ) );
    EXPECT_LE( replay_ii_strategy( pair, leaf, {}, *tree, 2 ).leaf, Rational( 1, 4 ) );

    auto lose = scratch( "i.json" );
    ASSERT_EQ( invoke( { "game", "--pair", pair_path, "--rounds", "2", "--epsilon", "1/16", "--strategy", lose.string() } ).code, 0 );
    auto lj = read_json_file( lose );
    ASSERT_FALSE( lj.at( "ii_wins" ).get< bool >() );
    auto witness = spoiler_tree_from_json( lj.at( "i_witness" ) );
    EXPECT_GE( replay_i_witness( pair, leaf, {}, witness.get(), 2 ).leaf, value );
    EXPECT_GT( value, Rational( 1, 16 ) );
}

TEST( Cli, RAlphaTable )
{
    auto pair_path = fixture( "pairs/rel3a__rel3b.json" );
    auto pair = load_pair( pair_path );
    auto o = invoke( { "--json", "ralpha", "--pair", pair_path, "--alpha", "3" } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    auto j = Json::parse( o.out );
    ASSERT_EQ( j.at( "table" ).size(), 4u );
    for ( std::size_t a = 0; a <= 3; ++a )
        EXPECT_EQ( rational_from_json( j.at( "table" )[ a ].at( "value" ) ), r_alpha( pair, {}, a ) ) << "alpha " << a;

    auto w = invoke( { "--json", "ralpha", "--pair", pair_path, "--alpha", "omega" } );
    ASSERT_EQ( w.code, 0 ) << w.err;
    EXPECT_EQ( rational_from_json( Json::parse( w.out ).at( "value" ) ), omega_game_value_atomic( pair ).value );
}

TEST( Cli, RAlphaOmegaLeaf )
{
    auto pair_path = fixture( "pairs/u_two01__u_two0half.json" );
    auto pair = load_pair( pair_path );
    auto omega = WeakModulus::uniform( PwlModulus::identity(), Aggregator::Max );
    auto path = scratch( "omega.json" );
    write_json_file( path, to_json( omega ) );
    auto o = invoke( { "--json", "ralpha", "--pair", pair_path, "--alpha", "1", "--leaf", "omega", "--omega", path.string() } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    EXPECT_EQ( rational_from_json( Json::parse( o.out ).at( "value" ) ), r_alpha( pair, {}, 1, LeafFamily::with_omega( omega ) ) );
}

TEST( Cli, ThetaReport )
{
    auto o = invoke( { "--json", "theta", "--formula", "sup x0. inf x1. 2 * d(x0,x1)", "--pair", fixture( "pairs/line3__triangle3.json" ) } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    auto j = Json::parse( o.out );
    EXPECT_EQ( j.at( "qr" ).get< std::size_t >(), 2u );
    auto f = parse_formula( "sup x0. inf x1. 2 * d(x0,x1)" );
    EXPECT_EQ( modulus_from_json( j.at( "theta" ) ), theta_of( f ) );
    EXPECT_LE( rational_from_json( j.at( "gap" ) ), rational_from_json( j.at( "bound" ) ) );

    auto s = invoke( { "theta", "--pair", fixture( "pairs/rel3a__rel4.json" ), "--samples", "40", "--seed", "11" } );
    EXPECT_EQ( s.code, 0 ) << s.err;
    EXPECT_TRUE( contains( s.out, "0 violation(s)" ) ) << s.out;
}

TEST( Cli, DistOverCorpus )
{
    auto o = invoke( { "--json", "dist", "--formula", "d(x0,x1)", "--formula", "min(d(x0,x1), 1/2)" } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    EXPECT_EQ( rational_from_json( Json::parse( o.out ).at( "value" ) ), Rational( 1, 2 ) );

    auto line = invoke( { "--json", "dist", "--formula", "d(x0,x1)", "--formula", "1/2 * d(x0,x1)", "--structure",
                          fixture( "structures/line3.json" ) } );
    ASSERT_EQ( line.code, 0 ) << line.err;
    auto s = load_structure( fixture( "structures/line3.json" ) );
    Rational diam{ 0 };
    for ( Point a = 0; a < s.size(); ++a )
        for ( Point b = 0; b < s.size(); ++b )
            diam = std::max( diam, s.dist( a, b ) );
    EXPECT_EQ( rational_from_json( Json::parse( line.out ).at( "value" ) ), diam / 2 );
    EXPECT_EQ( invoke( { "dist", "--formula", "d(x0,x1)" } ).code, 2 );
}

TEST( Demo, CoveringMatchesBruteForce )
{
    auto o = invoke( { "--json", "demo", "covering" } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    auto j = Json::parse( o.out );
    auto s = structure_from_json( j.at( "structure" ) );
    EXPECT_EQ( s.size(), 5u );
    ASSERT_EQ( j.at( "rows" ).size(), 3u );
    for ( const auto& row : j.at( "rows" ) ) {
        auto n = row.at( "n" ).get< std::size_t >();
        EXPECT_EQ( rational_from_json( row.at( "value" ) ), covering_by_subsets( s, n ) ) << "n = " << n;
    }
}

TEST( Demo, CoveringSentenceAndRadius )
{
    EXPECT_EQ( to_string( covering_sentence( 1 ) ), "inf x0. sup x1. d(x1, x0)" );
    EXPECT_THROW( (void)covering_sentence( 0 ), InvalidArgument );
    for ( const auto& [ name, s ] : cfo::testing::fixture_structures() ) {
        if ( s.size() > 6 )
            continue;
        for ( std::size_t n = 1; n <= 3; ++n ) {
            EXPECT_EQ( covering_radius( s, n ), covering_by_subsets( s, n ) ) << name << " n = " << n;
            EXPECT_EQ( evaluate( covering_sentence( n ), s ), covering_by_subsets( s, n ) ) << name << " n = " << n;
        }
    }
}

TEST( Demo, DistancePair )
{
    auto o = invoke( { "--json", "demo", "corollary54", "--delta", "1/2", "--m", "6" } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    auto j = Json::parse( o.out );
    EXPECT_EQ( j.at( "rounds" ).get< std::size_t >(), 2u );
    EXPECT_LE( rational_from_json( j.at( "value" ) ), Rational( 1, 7 ) );
    EXPECT_EQ( rational_from_json( j.at( "value" ) ), game_value( distance_pair( Rational( 1, 2 ), 6 ), 2 ).value );
    EXPECT_EQ( invoke( { "demo", "corollary54", "--delta", "1/10", "--m", "6" } ).code, 2 );
}

TEST( Demo, CardinalityPair )
{
    auto o = invoke( { "demo", "corollary55", "--epsilon", "1/4" } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    EXPECT_TRUE( contains( o.out, "game value 1/8" ) ) << o.out;
    EXPECT_TRUE( contains( o.out, "II strategy table" ) );
    EXPECT_TRUE( contains( o.out, "I R 2 -> II" ) );

    auto eighth = invoke( { "--json", "demo", "corollary55", "--epsilon", "1/8" } );
    ASSERT_EQ( eighth.code, 0 ) << eighth.err;
    auto j = Json::parse( eighth.out );
    EXPECT_EQ( rational_from_json( j.at( "value" ) ), Rational( 1, 16 ) );
    EXPECT_EQ( rational_from_json( j.at( "map_replay" ) ), Rational( 1, 16 ) );
    ASSERT_TRUE( j.contains( "ii_strategy" ) );
    auto pair = cardinality_pair( Rational( 1, 8 ) );
    AtomicLeaf leaf( pair );
    EXPECT_LE( replay_ii_strategy( pair, leaf, {}, *move_tree_from_json( j.at( "ii_strategy" ) ), 2 ).leaf, Rational( 1, 16 ) );
}

TEST( Demo, LevelCounterexampleEmitsPairFiles )
{
    auto dir = scratch( "section6" );
    std::filesystem::remove_all( dir );
    auto o = invoke( { "--json", "demo", "section6", "--m", "4", "--level-size", "2", "--out", dir.string() } );
    ASSERT_EQ( o.code, 0 ) << o.err;
    auto j = Json::parse( o.out );
    EXPECT_LE( rational_from_json( j.at( "value" ) ), Rational( 2, 5 ) );
    auto loaded = load_pair( dir / "section6_m4_pair.json" );
    auto built = build_section6_counterexample( 4, 2 );
    EXPECT_EQ( to_json( loaded ), to_json( built ) );
    EXPECT_EQ( rational_from_json( j.at( "value" ) ), game_value( built, 1 ).value );
    EXPECT_EQ( rational_from_json( j.at( "table" )[ 1 ].at( "omega" ) ), Rational( 1 ) );
}

TEST( Demo, Reproducible )
{
    for ( const char* name : { "covering", "corollary54", "corollary55", "section6" } ) {
        auto a = invoke( { "--json", "demo", name } ), b = invoke( { "--json", "demo", name } );
        EXPECT_EQ( a.code, b.code ) << name;
        EXPECT_EQ( a.out, b.out ) << name;
    }
}

TEST( Play, ScriptedGames )
{
    auto pair_path = fixture( "pairs/discrete2__cardinality_b.json" );
    auto zero = invoke( { "play", "--pair", pair_path, "--rounds", "0", "--epsilon", "1/4" } );
    EXPECT_EQ( zero.code, 0 ) << zero.err;
    EXPECT_TRUE( contains( zero.out, "II wins at ε=1/4" ) ) << zero.out;

    auto pair = load_pair( pair_path );
    auto as_i = invoke( { "play", "--pair", pair_path, "--rounds", "1", "--epsilon", "1/4", "--as", "I" }, "Q 0\nR 9\nR 1\n" );
    EXPECT_EQ( as_i.code, 0 ) << as_i.err;
    EXPECT_TRUE( contains( as_i.out, "expected L or R" ) ) << as_i.out;
    EXPECT_TRUE( contains( as_i.out, "'9' is not a point" ) ) << as_i.out;

    auto cut = invoke( { "play", "--pair", pair_path, "--rounds", "2", "--epsilon", "1/4", "--as", "I" }, "R 1\n" );
    EXPECT_EQ( cut.code, 1 );
    EXPECT_EQ( invoke( { "play", "--pair", pair_path, "--rounds", "1", "--epsilon", "1/4", "--as", "III" } ).code, 2 );
}
