#pragma once

#include "cfo/cli/demos.hpp"
#include "cfo/formula/enumerate.hpp"
#include "cfo/formula/sample.hpp"
#include "cfo/formula/syntax.hpp"
#include "cfo/game/json.hpp"
#include "cfo/game/play.hpp"
#include "cfo/infinitary/level_counterexample.hpp"
#include "cfo/infinitary/solvers.hpp"
#include "cfo/numerics/json.hpp"
#include "cfo/structures/builders.hpp"
#include "cfo/structures/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cfo::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_domain = 1;
inline constexpr int exit_usage = 2;

// Bad flag values, missing files; exit code 2.
class UsageError : public Error
{
public:
    using Error::Error;
};

struct Params
{
    std::string pair;
    std::string structure;
    std::vector< std::string > formulas;
    std::vector< std::string > structures;
    std::string assign;
    std::optional< std::size_t > rounds;
    std::string alpha = "1";
    std::string epsilon;
    std::size_t term_depth = 0;
    std::string leaf = "atomic";
    std::string omega;
    std::vector< std::string > scales;
    std::string strategy;
    std::string as = "II";
    std::string delta = "1/2";
    std::size_t m = 0;
    std::size_t level_size = 2;
    std::size_t max_n = 0;
    std::size_t samples = 0;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool json = false;
    std::size_t max_positions = default_max_positions;
};

namespace detail
{

inline std::size_t env_max_positions()
{
    const char* v = std::getenv( "CFO_MAX_POSITIONS" );
    if ( !v || !*v )
        return default_max_positions;
    try {
        std::size_t used = 0;
        auto n = std::stoull( v, &used );
        if ( used == std::string( v ).size() && n > 0 )
            return n;
    }
    catch ( const std::exception& ) {
    }
    throw UsageError( "CFO_MAX_POSITIONS must be a positive integer, got '" + std::string( v ) + "'" );
}

inline Rational rational_flag( const std::string& text, const char* flag )
{
    try {
        return Rational::parse( text );
    }
    catch ( const Error& e ) {
        throw UsageError( std::string( flag ) + ": " + e.what() );
    }
}

inline void require( bool ok, const std::string& message )
{
    if ( !ok )
        throw UsageError( message );
}

inline std::filesystem::path existing_file( const std::string& path, const char* flag )
{
    require( !path.empty(), std::string( flag ) + " is required" );
    require( std::filesystem::is_regular_file( path ), std::string( flag ) + ": no such file '" + path + "'" );
    return path;
}

inline NamedPair pair_flag( const Params& p ) { return load_pair( existing_file( p.pair, "--pair" ) ); }

inline MetricStructure structure_flag( const std::string& path ) { return load_structure( existing_file( path, "--structure" ) ); }

inline Formula formula_flag( const std::string& text, const Signature* sig )
{
    try {
        return parse_formula( text, sig );
    }
    catch ( const ParseError& e ) {
        throw UsageError( std::string( "--formula: " ) + e.what() );
    }
    catch ( const InvalidArgument& e ) {
        throw UsageError( std::string( "--formula: " ) + e.what() );
    }
}

// Comma-separated point indices or labels.
inline Assignment assignment_flag( const std::string& text, const MetricStructure& s )
{
    Assignment a;
    std::stringstream ss( text );
    std::string item;
    while ( std::getline( ss, item, ',' ) ) {
        auto b = item.find_first_not_of( ' ' ), e = item.find_last_not_of( ' ' );
        require( b != std::string::npos, "--assign: empty entry in '" + text + "'" );
        auto pt = cfo::detail::parse_point( item.substr( b, e - b + 1 ), s );
        require( pt.has_value(), "--assign: '" + item + "' is not a point of the structure" );
        a.push_back( *pt );
    }
    return a;
}

inline void check_assignment( const Formula& f, const Assignment& a )
{
    for ( auto v : free_variables( f ) )
        require( v < a.size(), "formula has free variable x" + std::to_string( v ) + "; pass --assign with at least " +
                                   std::to_string( v + 1 ) + " points" );
}

inline WeakModulus omega_flag( const Params& p )
{
    auto path = existing_file( p.omega, "--omega" );
    try {
        return weak_modulus_from_json( read_json_file( path ) );
    }
    catch ( const nlohmann::json::exception& e ) {
        throw UsageError( "--omega: malformed weak modulus: " + std::string( e.what() ) );
    }
}

inline OmegaOptions omega_options( const Params& p )
{
    OmegaOptions o;
    for ( const auto& s : p.scales ) {
        Rational q = rational_flag( s, "--scale" );
        require( q.sign() > 0, "--scale must be positive" );
        if ( std::find( o.scales.begin(), o.scales.end(), q ) == o.scales.end() )
            o.scales.push_back( q );
    }
    return o;
}

inline LeafFamily leaf_flag( const Params& p )
{
    if ( p.leaf == "atomic" )
        return LeafFamily::atomic( p.term_depth );
    if ( p.leaf == "omega" )
        return LeafFamily::with_omega( omega_flag( p ), p.term_depth, omega_options( p ) );
    throw UsageError( "--leaf must be 'atomic' or 'omega', got '" + p.leaf + "'" );
}

inline std::string side_letter( Side s ) { return s == Side::Left ? "L" : "R"; }

// One line per branch: "R 2 -> 1", nested rounds indented.
inline void print_tree( std::ostream& out, const MoveTree& t, std::size_t indent )
{
    for ( const auto& b : t.branches ) {
        out << std::string( indent, ' ' ) << "I " << side_letter( b.side ) << " " << b.move << " -> II " << b.reply << "\n";
        if ( b.next )
            print_tree( out, *b.next, indent + 2 );
    }
}

inline void print_witness( std::ostream& out, const SpoilerTree& t, std::size_t indent )
{
    out << std::string( indent, ' ' ) << "I " << side_letter( t.side ) << " " << t.move << "\n";
    for ( const auto& [ reply, next ] : t.replies ) {
        out << std::string( indent + 2, ' ' ) << "II " << reply << "\n";
        if ( next )
            print_witness( out, *next, indent + 4 );
    }
}

inline const char* verdict( bool ok ) { return ok ? "PASS" : "FAIL"; }

inline void emit( std::ostream& out, const Params& p, const Json& j, const std::string& text )
{
    if ( p.json )
        out << j.dump( 2 ) << "\n";
    else
        out << text;
}

inline std::size_t rounds_or( const Params& p, std::size_t fallback ) { return p.rounds.value_or( fallback ); }

inline GameOptions game_options( const Params& p )
{
    GameOptions o;
    o.max_positions = p.max_positions;
    return o;
}

// ---------------------------------------------------------------- commands

inline int cmd_validate( const Params& p, std::ostream& out )
{
    Json j = Json::object();
    std::string text;
    bool ok = true;
    auto add = [ & ]( const std::string& name, const MetricStructure& s ) {
        auto rep = validate( s );
        ok = ok && rep.ok();
        Json v = Json::array();
        for ( const auto& x : rep.violations )
            v.push_back( { { "kind", kind_name( x.kind ) }, { "message", x.message } } );
        j[ name ] = { { "ok", rep.ok() }, { "violations", v } };
        text += name + ": " + rep.to_string();
    };
    LoadOptions raw{ false };
    if ( !p.pair.empty() ) {
        auto pair = load_pair( existing_file( p.pair, "--pair" ), raw );
        add( "left", pair.left() );
        add( "right", pair.right() );
    }
    else {
        auto name = !p.structure.empty() ? p.structure : p.structures.empty() ? std::string() : p.structures[ 0 ];
        add( name, load_structure( existing_file( name, "structure file" ), raw ) );
    }
    emit( out, p, j, text );
    return ok ? exit_ok : exit_domain;
}

inline int cmd_eval( const Params& p, std::ostream& out )
{
    auto s = structure_flag( p.structure );
    require( p.formulas.size() == 1, "eval takes exactly one --formula" );
    auto f = formula_flag( p.formulas[ 0 ], &s.signature() );
    auto a = p.assign.empty() ? Assignment{} : assignment_flag( p.assign, s );
    check_assignment( f, a );
    Rational v = evaluate( f, s, a );
    Json j{ { "formula", to_string( f ) }, { "value", to_json( v ) }, { "value_text", v.to_string() } };
    emit( out, p, j, v.to_string() + "\n" );
    return exit_ok;
}

inline int cmd_game( const Params& p, std::ostream& out )
{
    auto pair = pair_flag( p );
    const std::size_t rounds = rounds_or( p, 1 );
    auto r = game_value( pair, rounds, p.term_depth, game_options( p ) );
    Json j = to_json( r );
    std::ostringstream text;
    text << "game value " << r.value << " (rounds = " << rounds << ", term depth " << p.term_depth
         << ( pair.signature().is_relational() ? "" : ", depth-truncated" ) << ")\n";
    Json cert = j;
    if ( !p.epsilon.empty() ) {
        Rational eps = rational_flag( p.epsilon, "--epsilon" );
        require( eps.sign() > 0, "--epsilon must be > 0" );
        bool ii = r.value <= eps;
        j[ "epsilon" ] = to_json( eps );
        j[ "ii_wins" ] = ii;
        text << ( ii ? "II" : "I" ) << " wins at ε=" << eps << "\n";
        cert = Json{ { "value", to_json( r.value ) }, { "epsilon", to_json( eps ) }, { "ii_wins", ii } };
        if ( ii && r.ii_strategy )
            cert[ "ii_strategy" ] = to_json( *r.ii_strategy );
        if ( !ii && r.i_witness ) {
            cert[ "i_witness" ] = to_json( *r.i_witness );
            text << "I's witness:\n";
            print_witness( text, *r.i_witness, 2 );
        }
    }
    if ( !p.strategy.empty() ) {
        write_json_file( p.strategy, cert );
        text << "strategy written to " << p.strategy << "\n";
    }
    emit( out, p, j, text.str() );
    return exit_ok;
}

inline int cmd_ralpha( const Params& p, std::ostream& out )
{
    auto pair = pair_flag( p );
    Json j = Json::object();
    std::ostringstream text;
    if ( p.alpha == "omega" || p.alpha == "w" ) {
        require( p.leaf == "atomic", "the omega clock supports only --leaf atomic" );
        auto r = omega_game_value_atomic( pair, {}, p.term_depth, p.max_positions );
        Json hist = Json::array();
        for ( const auto& v : r.history )
            hist.push_back( to_json( v ) );
        j = { { "alpha", "omega" }, { "value", to_json( r.value ) }, { "value_text", r.value.to_string() },
              { "stage", r.stage }, { "sets", r.sets }, { "history", hist } };
        text << "r_omega = " << r.value << " (stable from stage " << r.stage << ", " << r.sets << " sets)\n";
        emit( out, p, j, text.str() );
        return exit_ok;
    }
    std::size_t alpha = 0;
    try {
        std::size_t used = 0;
        alpha = std::stoull( p.alpha, &used );
        require( used == p.alpha.size(), "" );
    }
    catch ( const std::exception& ) {
        throw UsageError( "--alpha must be a natural number or 'omega', got '" + p.alpha + "'" );
    }
    auto family = leaf_flag( p );
    auto model = family.make( pair );
    RAlphaOptions ro;
    ro.max_positions = p.max_positions;
    ro.set_abstraction = family.mode == LeafFamily::Mode::Atomic && pair.signature().is_relational();
    RAlphaSolver solver( pair, *model, ro );
    Json table = Json::array();
    for ( std::size_t b = 0; b <= alpha; ++b ) {
        Rational v = solver.value( b, {} );
        table.push_back( { { "alpha", b }, { "value", to_json( v ) }, { "value_text", v.to_string() } } );
        text << "r_" << b << " = " << v << "\n";
    }
    j = { { "leaf", p.leaf }, { "alpha", alpha }, { "table", table }, { "value", table.back()[ "value" ] } };
    emit( out, p, j, text.str() );
    return exit_ok;
}

inline int cmd_theta( const Params& p, std::ostream& out )
{
    std::optional< NamedPair > pair;
    std::optional< Signature > sig;
    if ( !p.pair.empty() ) {
        pair = pair_flag( p );
        sig = pair->signature();
    }
    else if ( !p.structure.empty() )
        sig = structure_flag( p.structure ).signature();
    Json j = Json::object();
    std::ostringstream text;
    bool sound = true;
    if ( !p.formulas.empty() ) {
        require( p.formulas.size() == 1, "theta takes at most one --formula" );
        auto f = formula_flag( p.formulas[ 0 ], sig ? &*sig : nullptr );
        auto th = theta_of( f );
        j[ "formula" ] = to_string( f );
        j[ "qr" ] = qr( f );
        j[ "theta" ] = to_json( th );
        text << "formula " << to_string( f ) << "\nqr " << qr( f ) << "\ntheta " << th << "\n";
        if ( sig ) {
            auto mod = modulus_of( f, *sig );
            j[ "modulus" ] = to_json( mod );
            text << "modulus " << mod << "\n";
        }
        if ( pair ) {
            require( free_variables( f ).empty(), "theta --pair needs a sentence" );
            Rational v = game_value( *pair, qr( f ), p.term_depth, game_options( p ) ).value;
            Rational gap = abs( evaluate( f, pair->left() ) - evaluate( f, pair->right() ) );
            Rational bound = th( v );
            sound = gap <= bound;
            j[ "game_value" ] = to_json( v );
            j[ "gap" ] = to_json( gap );
            j[ "bound" ] = to_json( bound );
            text << "V_" << qr( f ) << " = " << v << ", |gap| = " << gap << " <= theta(V) = " << bound << ": "
                 << verdict( sound ) << "\n";
        }
    }
    if ( p.samples > 0 ) {
        require( pair.has_value(), "theta --samples needs --pair" );
        AtomicLeaf leaf( *pair, p.term_depth );
        GameSolver solver( *pair, leaf, game_options( p ) );
        SampleOptions so;
        so.free_vars = 0;
        so.term_depth = p.term_depth;
        std::size_t violations = 0;
        for ( const auto& f : sample_formulas( pair->signature(), rounds_or( p, 2 ), p.samples, p.seed, so ) ) {
            Rational gap = abs( evaluate( f, pair->left() ) - evaluate( f, pair->right() ) );
            if ( gap > theta_of( f )( solver.value( {}, qr( f ) ) ) )
                ++violations;
        }
        sound = sound && violations == 0;
        j[ "samples" ] = p.samples;
        j[ "violations" ] = violations;
        text << p.samples << " sampled sentences with qr <= " << rounds_or( p, 2 ) << " (seed " << p.seed << "): " << violations
             << " violation(s)\n";
    }
    require( !p.formulas.empty() || p.samples > 0, "theta needs --formula or --samples" );
    emit( out, p, j, text.str() );
    return sound ? exit_ok : exit_domain;
}

inline int cmd_dist( const Params& p, std::ostream& out )
{
    require( p.formulas.size() == 2, "dist takes exactly two --formula flags" );
    std::vector< MetricStructure > corpus;
    std::string source;
    if ( !p.structure.empty() )
        corpus.push_back( structure_flag( p.structure ) );
    for ( const auto& s : p.structures )
        corpus.push_back( structure_flag( s ) );
    Signature sig;
    if ( corpus.empty() ) {
        corpus = separating_corpus( sig );
        source = "separating corpus (empty signature, " + std::to_string( corpus.size() ) + " structures)";
    }
    else {
        sig = corpus[ 0 ].signature();
        source = std::to_string( corpus.size() ) + " structure(s)";
    }
    auto phi = formula_flag( p.formulas[ 0 ], &sig );
    auto psi = formula_flag( p.formulas[ 1 ], &sig );
    auto r = logical_distance_corpus( phi, psi, corpus );
    Json j{ { "value", to_json( r.value ) }, { "value_text", r.value.to_string() }, { "corpus_size", corpus.size() } };
    if ( r.structure ) {
        j[ "structure" ] = *r.structure;
        j[ "assignment" ] = r.assignment;
    }
    std::ostringstream text;
    text << "distance >= " << r.value << " over " << source << "\n";
    emit( out, p, j, text.str() );
    return exit_ok;
}

inline void maybe_save_pair( const Params& p, const NamedPair& pair, const std::string& stem, std::ostringstream& text, Json& j )
{
    if ( p.out_dir.empty() )
        return;
    std::filesystem::path dir( p.out_dir );
    std::filesystem::create_directories( dir );
    save_structure( pair.left(), dir / ( stem + "_left.json" ) );
    save_structure( pair.right(), dir / ( stem + "_right.json" ) );
    write_json_file( dir / ( stem + "_pair.json" ), Json{ { "left", stem + "_left.json" }, { "right", stem + "_right.json" } } );
    j[ "files" ] = { ( dir / ( stem + "_pair.json" ) ).string() };
    text << "wrote " << ( dir / ( stem + "_pair.json" ) ).string() << "\n";
}

inline int demo_covering( const Params& p, std::ostream& out )
{
    MetricStructure s = p.structure.empty()
                            ? line_space( { Rational( 0 ), Rational( 1, 4 ), Rational( 1, 2 ), Rational( 3, 4 ), Rational( 1 ) } )
                            : structure_flag( p.structure );
    std::size_t max_n = p.max_n ? p.max_n : 3;
    std::ostringstream text;
    Json rows = Json::array();
    bool ok = true;
    text << "covering sentences on " << s.size() << " points\n";
    for ( std::size_t n = 1; n <= max_n; ++n ) {
        Rational v = evaluate( covering_sentence( n ), s );
        Rational oracle = covering_radius( s, n );
        ok = ok && v == oracle;
        rows.push_back( { { "n", n }, { "value", to_json( v ) }, { "oracle", to_json( oracle ) }, { "pass", v == oracle } } );
        text << "n = " << n << ": sentence " << v << ", covering radius " << oracle << ": " << verdict( v == oracle ) << "\n";
    }
    Json j{ { "demo", "covering" }, { "rows", rows }, { "structure", to_json( s ) } };
    if ( !p.out_dir.empty() ) {
        std::filesystem::create_directories( p.out_dir );
        save_structure( s, std::filesystem::path( p.out_dir ) / "covering_space.json" );
        text << "wrote " << ( std::filesystem::path( p.out_dir ) / "covering_space.json" ).string() << "\n";
    }
    emit( out, p, j, text.str() );
    return ok ? exit_ok : exit_domain;
}

inline int demo_corollary54( const Params& p, std::ostream& out )
{
    Rational delta = rational_flag( p.delta, "--delta" );
    std::size_t m = p.m ? p.m : 6;
    std::size_t rounds = rounds_or( p, 2 );
    NamedPair pair = [ & ] {
        try {
            return distance_pair( delta, m );
        }
        catch ( const InvalidArgument& e ) {
            throw UsageError( e.what() );
        }
    }();
    auto r = game_value( pair, rounds, 0, game_options( p ) );
    Rational bound( 1, static_cast< std::int64_t >( m + 1 ) );
    bool ok = r.value <= bound;
    std::ostringstream text;
    text << "distance pair: delta = " << delta << ", m = " << m << "\n";
    text << "length-" << rounds << " game value " << r.value << " <= 1/(m+1) = " << bound << ": " << verdict( ok ) << "\n";
    Json j{ { "demo", "corollary54" }, { "delta", to_json( delta ) }, { "m", m },           { "rounds", rounds },
            { "value", to_json( r.value ) }, { "bound", to_json( bound ) }, { "pass", ok } };
    maybe_save_pair( p, pair, "corollary54_m" + std::to_string( m ), text, j );
    emit( out, p, j, text.str() );
    return ok ? exit_ok : exit_domain;
}

inline int demo_corollary55( const Params& p, std::ostream& out )
{
    Rational eps = rational_flag( p.epsilon.empty() ? "1/4" : p.epsilon, "--epsilon" );
    NamedPair pair = [ & ] {
        try {
            return cardinality_pair( eps );
        }
        catch ( const InvalidArgument& e ) {
            throw UsageError( e.what() );
        }
    }();
    std::size_t rounds = rounds_or( p, 2 );
    auto r = game_value( pair, rounds, 0, game_options( p ) );
    Rational expected = eps / 2;
    // II pretends 1 and 2 in B are the same element.
    AtomicLeaf leaf( pair );
    auto identification = map_strategy( { 0, 1 }, { 0, 1, 1 }, rounds );
    Rational replay = replay_ii_strategy( pair, leaf, {}, *identification, rounds ).leaf;
    bool value_ok = r.value == expected;
    bool map_ok = replay <= r.value;
    std::ostringstream text;
    text << "cardinality pair: eps = " << eps << ", rounds = " << rounds << "\n";
    text << "game value " << r.value << " (eps/2 = " << expected << "): " << verdict( value_ok ) << "\n";
    text << "II strategy table:\n";
    if ( r.ii_strategy )
        print_tree( text, *r.ii_strategy, 2 );
    text << "map 0->0, 1->1, 2->1 replayed against every I play: worst leaf " << replay << " <= " << r.value << ": "
         << verdict( map_ok ) << "\n";
    Json j{ { "demo", "corollary55" },       { "epsilon", to_json( eps ) },     { "rounds", rounds },
            { "value", to_json( r.value ) }, { "expected", to_json( expected ) }, { "map_replay", to_json( replay ) },
            { "pass", value_ok && map_ok } };
    if ( r.ii_strategy )
        j[ "ii_strategy" ] = to_json( *r.ii_strategy );
    maybe_save_pair( p, pair, "corollary55", text, j );
    emit( out, p, j, text.str() );
    return value_ok && map_ok ? exit_ok : exit_domain;
}

inline int demo_section6( const Params& p, std::ostream& out )
{
    std::size_t m = p.m ? p.m : 4;
    NamedPair pair = [ & ] {
        try {
            return build_section6_counterexample( m, p.level_size );
        }
        catch ( const InvalidArgument& e ) {
            throw UsageError( e.what() );
        }
    }();
    std::ostringstream text;
    text << "level counterexample: m = " << m << ", level size " << p.level_size << ", " << pair.left().size()
         << " points per side\n";
    RAlphaOptions ro;
    ro.max_positions = p.max_positions;
    ro.set_abstraction = true;
    Json table = Json::array();
    AtomicLeaf atomic( pair );
    RAlphaSolver atomic_solver( pair, atomic, ro );
    OmegaOptions oo;
    oo.scales.push_back( Rational( static_cast< std::int64_t >( m ) ) );
    auto family = LeafFamily::with_omega( WeakModulus::uniform( PwlModulus::identity(), Aggregator::Max ), 0, oo );
    auto omega = family.make( pair );
    RAlphaOptions oro;
    oro.max_positions = p.max_positions;
    RAlphaSolver omega_solver( pair, *omega, oro );
    text << "alpha  atomic  omega(max of identities)\n";
    for ( std::size_t a = 0; a <= 1; ++a ) {
        Rational va = atomic_solver.value( a, {} ), vo = omega_solver.value( a, {} );
        table.push_back( { { "alpha", a }, { "atomic", to_json( va ) }, { "omega", to_json( vo ) } } );
        text << a << "      " << va << "  " << vo << "\n";
    }
    Rational v1 = game_value( pair, 1, 0, game_options( p ) ).value;
    Rational bound( 2, static_cast< std::int64_t >( m + 1 ) );
    bool ok = v1 <= bound;
    text << "length-1 game value " << v1 << " <= 2/(m+1) = " << bound << ": " << verdict( ok ) << "\n";
    Json j{ { "demo", "section6" }, { "m", m }, { "level_size", p.level_size }, { "table", table },
            { "value", to_json( v1 ) }, { "bound", to_json( bound ) }, { "pass", ok } };
    maybe_save_pair( p, pair, "section6_m" + std::to_string( m ), text, j );
    emit( out, p, j, text.str() );
    return ok ? exit_ok : exit_domain;
}

inline int cmd_play( const Params& p, std::istream& in, std::ostream& out )
{
    auto pair = pair_flag( p );
    require( !p.epsilon.empty(), "play needs --epsilon" );
    Rational eps = rational_flag( p.epsilon, "--epsilon" );
    require( eps.sign() > 0, "--epsilon must be > 0" );
    Player human;
    if ( p.as == "I" || p.as == "i" )
        human = Player::I;
    else if ( p.as == "II" || p.as == "ii" )
        human = Player::II;
    else
        throw UsageError( "--as must be I or II, got '" + p.as + "'" );
    auto r = play_interactive( pair, rounds_or( p, 1 ), eps, human, in, out, p.term_depth, game_options( p ) );
    return r.complete ? exit_ok : exit_domain;
}

} // namespace detail

/*
 * Runs one command line. Exit codes: 0 success, 1 a check failed or the
 * input violates the domain (invalid structure, resource cap), 2 usage error.
 */
inline int run( int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err )
{
    Params p;
    CLI::App app( "Exact solvers for continuous first-order logic on finite metric structures", "cfo" );
    app.require_subcommand( 1 );
    app.fallthrough();
    app.add_flag( "--json", p.json, "Machine-readable output with exact rationals as [num, den]" );
    app.add_option( "--max-positions", p.max_positions, "Cap on memoized positions (default from CFO_MAX_POSITIONS)" )
        ->check( CLI::PositiveNumber );
    app.add_option( "--seed", p.seed, "Seed for sampled inputs" );

    auto pair_opt = [ & ]( CLI::App* c, bool required ) {
        auto* o = c->add_option( "--pair", p.pair, "Pair file {\"left\": ..., \"right\": ...}" );
        if ( required )
            o->required();
    };
    auto depth_opt = [ & ]( CLI::App* c ) { c->add_option( "--term-depth", p.term_depth, "Term depth for atomic formulas" ); };

    auto* validate_cmd = app.add_subcommand( "validate", "Check metric-structure conditions" );
    validate_cmd->add_option( "file", p.structures, "Structure file" )->expected( 0, 1 );
    validate_cmd->add_option( "--structure", p.structure, "Structure file" );
    pair_opt( validate_cmd, false );

    auto* eval_cmd = app.add_subcommand( "eval", "Evaluate a formula in a structure" );
    eval_cmd->add_option( "--structure", p.structure, "Structure file" )->required();
    eval_cmd->add_option( "--formula", p.formulas, "Formula text" )->required();
    eval_cmd->add_option( "--assign", p.assign, "Comma-separated points for x0, x1, ..." );

    auto* game_cmd = app.add_subcommand( "game", "Exact value of the n-round EF game" );
    pair_opt( game_cmd, true );
    game_cmd->add_option( "--rounds", p.rounds, "Number of rounds" )->required();
    depth_opt( game_cmd );
    game_cmd->add_option( "--epsilon", p.epsilon, "Precision num/den; reports the winner" );
    game_cmd->add_option( "--strategy", p.strategy, "Write the strategy certificate here" );

    auto* ralpha_cmd = app.add_subcommand( "ralpha", "Back-and-forth pseudometric r_alpha" );
    pair_opt( ralpha_cmd, true );
    ralpha_cmd->add_option( "--alpha", p.alpha, "Natural number or 'omega'" )->capture_default_str();
    ralpha_cmd->add_option( "--leaf", p.leaf, "atomic or omega" )->capture_default_str();
    ralpha_cmd->add_option( "--omega", p.omega, "Weak modulus file for --leaf omega" );
    ralpha_cmd->add_option( "--scale", p.scales, "Extra Scale(q) connective for basic formulas" );
    depth_opt( ralpha_cmd );

    auto* theta_cmd = app.add_subcommand( "theta", "Error-propagation modulus report" );
    theta_cmd->add_option( "--formula", p.formulas, "Formula text" );
    theta_cmd->add_option( "--structure", p.structure, "Structure supplying the signature" );
    pair_opt( theta_cmd, false );
    theta_cmd->add_option( "--samples", p.samples, "Check this many sampled sentences on --pair" );
    theta_cmd->add_option( "--rounds", p.rounds, "Quantifier-rank bound for --samples (default 2)" );
    depth_opt( theta_cmd );

    auto* dist_cmd = app.add_subcommand( "dist", "Logical distance over a corpus" );
    dist_cmd->add_option( "--formula", p.formulas, "Two formulas" )->required();
    dist_cmd->add_option( "--structure", p.structures, "Corpus structures (default: separating corpus)" );

    auto* demo_cmd = app.add_subcommand( "demo", "Worked examples" );
    demo_cmd->require_subcommand( 1 );
    auto* covering = demo_cmd->add_subcommand( "covering", "Covering sentences against brute force" );
    covering->add_option( "--structure", p.structure, "Metric space (default: 5 points on a line)" );
    covering->add_option( "--n", p.max_n, "Largest number of centers (default 3)" );
    auto* c54 = demo_cmd->add_subcommand( "corollary54", "Truncated distance pair" );
    c54->add_option( "--delta", p.delta, "Distance delta" )->capture_default_str();
    c54->add_option( "--m", p.m, "Truncation size (default 6)" );
    c54->add_option( "--rounds", p.rounds, "Number of rounds (default 2)" );
    auto* c55 = demo_cmd->add_subcommand( "corollary55", "Two points against three" );
    c55->add_option( "--epsilon", p.epsilon, "Precision (default 1/4)" );
    c55->add_option( "--rounds", p.rounds, "Number of rounds (default 2)" );
    auto* s6 = demo_cmd->add_subcommand( "section6", "Atomic values decay, a weak modulus sees the gap" );
    s6->add_option( "--m", p.m, "Number of levels (default 4)" );
    s6->add_option( "--level-size", p.level_size, "Points per level" )->capture_default_str();
    for ( auto* d : { covering, c54, c55, s6 } ) {
        d->add_option( "--out", p.out_dir, "Directory for the emitted structure files" );
        d->fallthrough();
    }
    demo_cmd->fallthrough();

    auto* play_cmd = app.add_subcommand( "play", "Play the game against the solver on stdin" );
    pair_opt( play_cmd, true );
    play_cmd->add_option( "--rounds", p.rounds, "Number of rounds" )->required();
    play_cmd->add_option( "--epsilon", p.epsilon, "Precision num/den" )->required();
    play_cmd->add_option( "--as", p.as, "Your side: I or II" )->capture_default_str();
    depth_opt( play_cmd );

    for ( auto* c : { validate_cmd, eval_cmd, game_cmd, ralpha_cmd, theta_cmd, dist_cmd, play_cmd } )
        c->fallthrough();

    try {
        p.max_positions = detail::env_max_positions();
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e ) {
        int code = app.exit( e, out, err );
        return code == 0 ? exit_ok : exit_usage;
    }
    catch ( const UsageError& e ) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if ( validate_cmd->parsed() )
            return detail::cmd_validate( p, out );
        if ( eval_cmd->parsed() )
            return detail::cmd_eval( p, out );
        if ( game_cmd->parsed() )
            return detail::cmd_game( p, out );
        if ( ralpha_cmd->parsed() )
            return detail::cmd_ralpha( p, out );
        if ( theta_cmd->parsed() )
            return detail::cmd_theta( p, out );
        if ( dist_cmd->parsed() )
            return detail::cmd_dist( p, out );
        if ( play_cmd->parsed() )
            return detail::cmd_play( p, in, out );
        if ( covering->parsed() )
            return detail::demo_covering( p, out );
        if ( c54->parsed() )
            return detail::demo_corollary54( p, out );
        if ( c55->parsed() )
            return detail::demo_corollary55( p, out );
        if ( s6->parsed() )
            return detail::demo_section6( p, out );
    }
    catch ( const UsageError& e ) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch ( const ParseError& e ) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch ( const ValidationError& e ) {
        err << "error: " << e.what();
        return exit_domain;
    }
    catch ( const ResourceError& e ) {
        err << "error: " << e.what() << "; raise the cap or shrink the instance\n";
        return exit_domain;
    }
    catch ( const Error& e ) {
        err << "error: " << e.what() << "\n";
        return exit_domain;
    }
    return exit_usage;
}

} // namespace cfo::cli
