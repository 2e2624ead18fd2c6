#include "cfo/formula/enumerate.hpp"
#include "cfo/formula/sample.hpp"
#include "cfo/formula/semantics.hpp"
#include "cfo/formula/syntax.hpp"
#include "cfo/structures/builders.hpp"
#include "cfo/structures/random.hpp"
#include "cfo/structures/validate.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cfo;
using namespace cfo::testing;

namespace
{

Signature unary_p( PwlModulus m = PwlModulus::identity() ) { return Signature( { { "P", 1, std::move( m ) } }, {}, {} ); }

Term x( std::size_t i ) { return Term::variable( i ); }

MetricStructure line3() { return line_space( { 0, Rational( 1, 2 ), 1 } ); }

// Random valid structures with their own random relational signatures, plus
// the function fixtures.
std::vector< MetricStructure > structure_pool( std::uint64_t seed, std::size_t count )
{
    std::mt19937_64 rng( seed );
    RandomOptions opts;
    opts.max_constants = 1;
    opts.max_points = 3;
    std::vector< MetricStructure > out;
    for ( std::size_t i = 0; i < count; ++i )
        out.push_back( random_pair( rng, opts ).left() );
    auto fixtures = fixture_structures();
    out.push_back( fixtures.at( "f_swap" ) );
    out.push_back( fixtures.at( "f_const" ) );
    return out;
}

} // namespace

TEST( Parse, Examples )
{
    EXPECT_EQ( parse_formula( "inf x0. d(x0, c)" ), Formula::inf( 0, Formula::dist( x( 0 ), Term::constant( "c" ) ) ) );
    EXPECT_EQ( parse_formula( "max(P(x0), 1 - P(x1))" ),
               Formula::max( { Formula::pred( "P", { x( 0 ) } ), Formula::neg( Formula::pred( "P", { x( 1 ) } ) ) } ) );
    EXPECT_EQ( parse_formula( "0.25" ), Formula::constant( Rational( 1, 4 ) ) );
    EXPECT_EQ( parse_formula( "3/2 * d(x0, x1)" ), Formula::scale( Rational( 3, 2 ), Formula::dist( x( 0 ), x( 1 ) ) ) );
    EXPECT_EQ( parse_formula( "d(x0,x1) -. d(x1,x2) (+) 1/2" ),
               Formula::trunc_add( Formula::trunc_sub( Formula::dist( x( 0 ), x( 1 ) ), Formula::dist( x( 1 ), x( 2 ) ) ),
                                   Formula::constant( Rational( 1, 2 ) ) ) );
    EXPECT_EQ( parse_formula( "d(f(x0), f(f(c)))" ),
               Formula::dist( Term::apply( "f", { x( 0 ) } ), Term::apply( "f", { Term::apply( "f", { Term::constant( "c" ) } ) } ) ) );
}

TEST( Parse, NamedBoundVariables )
{
    // Named variables get indices above every x<digits> in the text.
    EXPECT_EQ( parse_formula( "sup y. d(y, x0)" ), Formula::sup( 1, Formula::dist( x( 1 ), x( 0 ) ) ) );
    EXPECT_EQ( parse_formula( "inf x0. inf x1. sup y. min(d(y,x0), d(y,x1))" ),
               Formula::inf( 0, Formula::inf( 1, Formula::sup( 2, Formula::min( { Formula::dist( x( 2 ), x( 0 ) ),
                                                                                   Formula::dist( x( 2 ), x( 1 ) ) } ) ) ) ) );
    EXPECT_EQ( parse_formula( "max(inf y. P(y), sup y. P(y))" ),
               Formula::max( { Formula::inf( 0, Formula::pred( "P", { x( 0 ) } ) ), Formula::sup( 0, Formula::pred( "P", { x( 0 ) } ) ) } ) );
}

TEST( Parse, Errors )
{
    auto position = []( const char* text, const Signature* sig = nullptr ) -> std::optional< std::size_t > {
        try {
            (void)parse_formula( text, sig );
        }
        catch ( const ParseError& e ) {
            return e.position();
        }
        return std::nullopt;
    };
    EXPECT_EQ( position( "inf x0 d(x0, x0)" ), 7u );
    EXPECT_EQ( position( "d(x0, x1" ), 8u );
    EXPECT_EQ( position( "d(x0)" ), 0u );
    EXPECT_EQ( position( "x0" ), 0u );
    EXPECT_EQ( position( "2" ), 0u );
    EXPECT_EQ( position( "d(x0, x1) $" ), 10u );
    EXPECT_EQ( position( "d(x0, x1) d(x0, x1)" ), 10u );
    EXPECT_EQ( position( "inf d. P(x0)" ), 4u );
    Signature sig = unary_p();
    EXPECT_EQ( position( "Q(x0)", &sig ), 0u );
    EXPECT_EQ( position( "P(x0, x1)", &sig ), 0u );
    EXPECT_EQ( position( "inf P. P(x0)", &sig ), 4u );
    EXPECT_FALSE( position( "P(x0)", &sig ) );
}

TEST( Print, Examples )
{
    EXPECT_EQ( to_string( parse_formula( "inf   x0 .d( x0,c )" ) ), "inf x0. d(x0, c)" );
    EXPECT_EQ( to_string( parse_formula( "1 - (d(x0,x1) -. 0.5)" ) ), "1 - (d(x0, x1) -. 1/2)" );
    EXPECT_EQ( to_string( parse_formula( "d(x0,x1) -. (d(x0,x1) -. d(x1,x1))" ) ), "d(x0, x1) -. (d(x0, x1) -. d(x1, x1))" );
    EXPECT_EQ( to_string( parse_formula( "2 * (inf x0. P(x0))" ) ), "2 * (inf x0. P(x0))" );
    EXPECT_EQ( to_string( parse_formula( "(inf x0. P(x0)) (+) P(x1)" ) ), "(inf x0. P(x0)) (+) P(x1)" );
}

TEST( Print, RoundTripSampled )
{
    std::mt19937_64 rng( 1 );
    RandomOptions opts;
    opts.max_constants = 2;
    std::size_t checked = 0;
    for ( unsigned round = 0; round < 10; ++round ) {
        Signature sig = random_pair( rng, opts ).signature();
        if ( round % 3 == 0 )
            sig = Signature( sig.predicates(), { { "f", 1, PwlModulus::identity() }, { "g", 2, PwlModulus::identity() } },
                             sig.constants() );
        for ( const auto& f : sample_formulas( sig, 3, 50, round ) ) {
            std::string text = to_string( f );
            Formula back = parse_formula( text, sig );
            ASSERT_EQ( back, f ) << text;
            ASSERT_EQ( to_string( back ), text );
            ++checked;
        }
    }
    EXPECT_EQ( checked, 500u );
}

TEST( Qr, Examples )
{
    EXPECT_EQ( qr( parse_formula( "d(x0,x1)" ) ), 0u );
    EXPECT_EQ( qr( parse_formula( "sup x1. inf x2. P(x1,x2)" ) ), 2u );
    EXPECT_EQ( qr( parse_formula( "max(inf x. P(x), d(x0,x0))" ) ), 1u );
}

TEST( Evaluate, Examples )
{
    auto two = two_point_discrete();
    EXPECT_EQ( evaluate( parse_formula( "sup y. d(y, x0)" ), two, { 0 } ), Rational( 1 ) );
    auto cover2 = parse_formula( "inf x0. inf x1. sup y. min(d(y,x0), d(y,x1))" );
    EXPECT_EQ( evaluate( cover2, two ), Rational( 0 ) );
    auto cover1 = parse_formula( "inf x0. sup y. d(y, x0)" );
    EXPECT_EQ( evaluate( cover1, line3() ), Rational( 1, 2 ) );
    EXPECT_THROW( (void)evaluate( parse_formula( "d(x0, x1)" ), two, { 0 } ), InvalidArgument );

    MetricStructure s( unary_p(), 2 );
    s.set_predicate( "P", { 1 }, Rational( 3, 4 ) );
    EXPECT_EQ( evaluate( parse_formula( "P(x0) (+) P(x0)" ), s, { 1 } ), Rational( 1 ) );
    EXPECT_EQ( evaluate( parse_formula( "P(x0) -. 1" ), s, { 1 } ), Rational( 0 ) );
    EXPECT_EQ( evaluate( parse_formula( "1/2 * P(x0)" ), s, { 1 } ), Rational( 3, 8 ) );
    EXPECT_EQ( evaluate( parse_formula( "2 * P(x0)" ), s, { 1 } ), Rational( 1 ) );
    EXPECT_EQ( evaluate( parse_formula( "min(P(x0), 1/2, 1 - P(x0))" ), s, { 1 } ), Rational( 1, 4 ) );
}

TEST( Evaluate, ValuesStayInUnitInterval )
{
    auto pool = structure_pool( 21, 40 );
    std::mt19937_64 rng( 22 );
    for ( std::size_t i = 0; i < pool.size(); ++i ) {
        const auto& s = pool[ i ];
        SampleOptions so;
        so.free_vars = 2;
        for ( const auto& f : sample_formulas( s.signature(), 2, 10, i, so ) ) {
            Rational v = evaluate( f, s, random_assignment( variable_width( f ), s.size(), rng ) );
            EXPECT_GE( v, Rational( 0 ) );
            EXPECT_LE( v, Rational( 1 ) );
        }
    }
}

TEST( ConnectiveModuli, Basis )
{
    EXPECT_TRUE( connective_modulus( Connective::constant( Rational( 1, 3 ) ) ).is_zero() );
    EXPECT_TRUE( connective_modulus( Connective::neg() ).is_identity() );
    // Under the max tuple metric both arguments can move by t at once.
    EXPECT_EQ( connective_modulus( Connective::trunc_sub() ), PwlModulus::capped_linear( 2 ) );
    EXPECT_EQ( connective_modulus( Connective::trunc_add() ), PwlModulus::capped_linear( 2 ) );
    EXPECT_TRUE( connective_modulus( Connective::min( 3 ) ).is_identity() );
    EXPECT_TRUE( connective_modulus( Connective::max( 2 ) ).is_identity() );
    EXPECT_EQ( connective_modulus( Connective::scale( 3 ) ), PwlModulus::capped_linear( 3 ) );
    EXPECT_TRUE( is_one_lipschitz( Connective::scale( Rational( 1, 2 ) ) ) );
    EXPECT_FALSE( is_one_lipschitz( Connective::scale( 2 ) ) );
}

TEST( ModulusOf, Examples )
{
    Signature sig = unary_p();
    EXPECT_EQ( modulus_of( parse_formula( "d(x0, x1)" ), sig ), PwlModulus::capped_linear( 2 ) );
    EXPECT_EQ( modulus_of( parse_formula( "3 * P(x0)" ), sig ), PwlModulus::capped_linear( 3 ) );
    auto body = parse_formula( "min(P(x0), d(x0, x1))" );
    EXPECT_EQ( modulus_of( Formula::inf( 1, body ), sig ), modulus_of( body, sig ) );
    Signature fsig( { { "P", 1, PwlModulus::linear( Rational( 1, 2 ) ) } }, { { "f", 1, PwlModulus::capped_linear( 4 ) } }, {} );
    EXPECT_EQ( modulus_of( parse_formula( "P(f(x0))" ), fsig ), PwlModulus::capped_linear( 2, Rational( 1, 2 ) ) );
}

TEST( ModulusOf, SoundOnSampledTriples )
{
    auto pool = structure_pool( 31, 60 );
    std::mt19937_64 rng( 32 );
    std::size_t triples = 0;
    for ( std::size_t i = 0; triples < 500; ++i ) {
        const auto& s = pool[ i % pool.size() ];
        auto f = sample_formulas( s.signature(), 2, 1, 1000 + i )[ 0 ];
        auto fv = free_variables( f );
        auto m = modulus_of( f, s.signature() );
        std::size_t w = variable_width( f );
        for ( int rep = 0; rep < 4; ++rep, ++triples ) {
            auto a = random_assignment( w, s.size(), rng ), b = random_assignment( w, s.size(), rng );
            Rational t = 0;
            for ( auto v : fv )
                t = std::max( t, s.dist( a[ v ], b[ v ] ) );
            Rational gap = abs( evaluate( f, s, a ) - evaluate( f, s, b ) );
            ASSERT_LE( gap, m( t ) ) << to_string( f ) << " modulus " << m;
        }
    }
}

TEST( DeltaFormula, Examples )
{
    Signature sig;
    auto two = PwlModulus::capped_linear( 2 );
    EXPECT_TRUE( is_delta_formula( parse_formula( "d(x0, x1)" ), two, sig ) );
    EXPECT_FALSE( is_delta_formula( parse_formula( "d(x0, x1)" ), PwlModulus::identity(), sig ) );
    EXPECT_TRUE( is_delta_formula( parse_formula( "1 - inf x1. d(x1, x0)" ), two, sig ) );
    // Only atomic or quantified children are allowed below a connective.
    EXPECT_FALSE( is_delta_formula( parse_formula( "1 - (1 - d(x0, x1))" ), two, sig ) );
    EXPECT_FALSE( is_delta_formula( parse_formula( "3 * d(x0, x1)" ), two, sig ) );
    EXPECT_TRUE( is_delta_formula( parse_formula( "2 * d(x0, x1)" ), two, sig ) );
}

TEST( Theta, Examples )
{
    EXPECT_TRUE( theta_of( parse_formula( "d(x0, x1)" ) ).is_identity() );
    EXPECT_TRUE( theta_of( parse_formula( "P(x0, c)" ) ).is_identity() );
    EXPECT_TRUE( theta_of( parse_formula( "1 - d(x0, x1)" ) ).is_identity() );
    EXPECT_EQ( theta_of( parse_formula( "2 * inf x. P(x)" ) ), PwlModulus::capped_linear( 2 ) );
    EXPECT_EQ( theta_of( parse_formula( "3 * (2 * P(x0))" ) ), PwlModulus::capped_linear( 6 ) );
    EXPECT_TRUE( theta_of( parse_formula( "0.5" ) ).is_zero() );
}

TEST( Theta, LipschitzWrapperKeepsTheta )
{
    Signature sig = unary_p();
    for ( const auto& f : sample_formulas( sig, 2, 200, 41 ) ) {
        auto t = theta_of( f );
        EXPECT_EQ( theta_of( Formula::neg( f ) ), t );
        EXPECT_EQ( theta_of( Formula::max( { f, f } ) ), t );
        EXPECT_EQ( theta_of( Formula::inf( 5, f ) ), t );
    }
}

TEST( NormalizeSup, Examples )
{
    auto p = Formula::pred( "P", { x( 0 ) } );
    EXPECT_EQ( normalize_sup( Formula::sup( 0, p ) ), Formula::neg( Formula::inf( 0, Formula::neg( p ) ) ) );
    auto plain = parse_formula( "inf x0. min(P(x0), 1 - d(x0, x1))" );
    EXPECT_EQ( normalize_sup( plain ), plain );
    auto twice = parse_formula( "sup x0. max(P(x0), sup x1. d(x0, x1))" );
    auto rewritten = normalize_sup( twice );
    EXPECT_EQ( to_string( rewritten ), "1 - (inf x0. 1 - max(P(x0), 1 - (inf x1. 1 - d(x0, x1))))" );
    for ( const auto& [ name, s ] : fixture_structures() ) {
        if ( s.signature() == unary_p( PwlModulus::capped_linear( 2 ) ) ) {
            EXPECT_EQ( evaluate( rewritten, s ), evaluate( twice, s ) ) << name;
        }
    }
}

TEST( NormalizeSup, PreservesValues )
{
    auto pool = structure_pool( 51, 50 );
    std::mt19937_64 rng( 52 );
    std::size_t triples = 0;
    for ( std::size_t i = 0; triples < 500; ++i, ++triples ) {
        const auto& s = pool[ i % pool.size() ];
        auto f = sample_formulas( s.signature(), 3, 1, 2000 + i )[ 0 ];
        auto a = random_assignment( variable_width( f ), s.size(), rng );
        auto g = normalize_sup( f );
        ASSERT_EQ( evaluate( g, s, a ), evaluate( f, s, a ) ) << to_string( f );
        ASSERT_EQ( qr( g ), qr( f ) );
    }
}

TEST( CollapseConnectives, PreservesValueAndRank )
{
    auto pool = structure_pool( 61, 30 );
    std::mt19937_64 rng( 62 );
    std::size_t collapsed = 0;
    for ( std::size_t i = 0; i < 300; ++i ) {
        const auto& s = pool[ i % pool.size() ];
        auto f = sample_formulas( s.signature(), 2, 1, 3000 + i )[ 0 ];
        auto g = collapse_connectives( f );
        auto a = random_assignment( variable_width( f ), s.size(), rng );
        ASSERT_EQ( evaluate( g, s, a ), evaluate( f, s, a ) ) << to_string( f );
        ASSERT_EQ( qr( g ), qr( f ) );
        ASSERT_EQ( expand_composites( g ), f );
        collapsed += g != f;
    }
    EXPECT_GT( collapsed, 0u );
}

TEST( EnumerateAtomic, Examples )
{
    EnumerateOptions all;
    all.reflexive = true;
    all.symmetric_dedup = false;
    EnumerateOptions reflexive;
    reflexive.reflexive = true;
    EXPECT_EQ( enumerate_atomic( Signature{}, 2, 0, all ).size(), 4u );
    EXPECT_EQ( enumerate_atomic( Signature{}, 2, 0, reflexive ).size(), 3u );
    EXPECT_EQ( enumerate_atomic( Signature{}, 2 ), ( std::vector< Formula >{ Formula::dist( x( 0 ), x( 1 ) ) } ) );

    auto unary = enumerate_atomic( unary_p(), 1, 5, reflexive );
    EXPECT_EQ( unary, ( std::vector< Formula >{ Formula::dist( x( 0 ), x( 0 ) ), Formula::pred( "P", { x( 0 ) } ) } ) );

    Signature fsig( {}, { { "f", 1, PwlModulus::identity() } }, {} );
    auto terms = enumerate_terms( fsig, 1, 2 );
    EXPECT_EQ( terms, ( std::vector< Term >{ x( 0 ), Term::apply( "f", { x( 0 ) } ), Term::apply( "f", { Term::apply( "f", { x( 0 ) } ) } ) } ) );
    EXPECT_EQ( enumerate_atomic( fsig, 1, 2, all ).size(), 9u );
    EXPECT_EQ( enumerate_atomic( fsig, 1, 2 ).size(), 3u );
}

TEST( EnumerateAtomic, NoDuplicatesAndBoundedDepth )
{
    Signature sig( { { "R", 2, PwlModulus::identity() } }, { { "f", 1, PwlModulus::identity() }, { "g", 2, PwlModulus::identity() } }, { "c" } );
    for ( std::size_t depth = 0; depth <= 2; ++depth ) {
        auto atoms = enumerate_atomic( sig, 2, depth );
        std::set< std::string > seen;
        for ( const auto& a : atoms ) {
            EXPECT_TRUE( seen.insert( to_string( a ) ).second ) << to_string( a );
            EXPECT_LE( term_depth( a ), depth );
            EXPECT_TRUE( is_well_formed( a, sig ) );
        }
    }
}

TEST( LogicalDistance, Examples )
{
    Signature pq( { { "P", 1, PwlModulus::identity() }, { "Q", 1, PwlModulus::identity() } }, {}, { "c" } );
    MetricStructure s( pq, 2 );
    for ( Point p = 0; p < 2; ++p ) {
        s.set_predicate( "P", { p }, 0 );
        s.set_predicate( "Q", { p }, 1 );
    }
    auto phi = parse_formula( "P(c)" ), psi = parse_formula( "Q(c)" );
    EXPECT_EQ( logical_distance_corpus( phi, phi, { s } ).value, Rational( 0 ) );
    auto d = logical_distance_corpus( phi, psi, { s } );
    EXPECT_EQ( d.value, Rational( 1 ) );
    EXPECT_EQ( d.structure, 0u );

    Signature two_consts( { { "P", 1, PwlModulus::identity() } }, {}, { "c", "e" } );
    MetricStructure t( two_consts, 2 );
    t.set_predicate( "P", { 1 }, 1 );
    t.set_constant( "e", 1 );
    EXPECT_EQ( logical_distance_corpus( parse_formula( "P(c)" ), parse_formula( "P(e)" ), { t } ).value, Rational( 1 ) );
    EXPECT_TRUE( logical_distance_corpus( phi, psi, {} ).value.is_zero() );
    EXPECT_THROW( (void)logical_distance_corpus( parse_formula( "P(x0)" ), psi, { s } ), InvalidArgument );
}

TEST( LogicalDistance, SeparatingCorpusIsDiscrete )
{
    std::mt19937_64 rng( 71 );
    RandomOptions opts;
    opts.max_constants = 2;
    for ( int round = 0; round < 12; ++round ) {
        Signature sig = random_signature( rng, opts );
        auto corpus = separating_corpus( sig );
        for ( const auto& s : corpus )
            ASSERT_TRUE( validate( s ).ok() ) << validate( s ).to_string();
        const std::size_t k = 2;
        auto atoms = enumerate_atomic( sig, k );
        for ( std::size_t i = 0; i < atoms.size(); ++i )
            for ( std::size_t j = i + 1; j < atoms.size(); ++j ) {
                // Distance over x0..x{k-1}, the context shared by both atoms.
                Rational best = 0;
                for ( const auto& s : corpus )
                    for ( std::size_t idx = 0; idx < 4; ++idx ) {
                        auto a = detail::tuple_at( idx, 2, k );
                        best = std::max( best, abs( evaluate( atoms[ i ], s, a ) - evaluate( atoms[ j ], s, a ) ) );
                    }
                EXPECT_EQ( best, Rational( 1 ) ) << to_string( atoms[ i ] ) << " vs " << to_string( atoms[ j ] );
                if ( free_variables( atoms[ i ] ) == free_variables( atoms[ j ] ) ) {
                    EXPECT_EQ( logical_distance_corpus( atoms[ i ], atoms[ j ], corpus ).value, best );
                }
            }
    }
}

TEST( Sample, Basics )
{
    Signature sig = unary_p();
    EXPECT_TRUE( sample_formulas( sig, 2, 0, 5 ).empty() );
    EXPECT_EQ( sample_formulas( sig, 2, 50, 5 ), sample_formulas( sig, 2, 50, 5 ) );
    EXPECT_NE( sample_formulas( sig, 2, 50, 5 ), sample_formulas( sig, 2, 50, 6 ) );
    auto many = sample_formulas( sig, 2, 500, 7 );
    std::size_t with_rank_two = 0;
    for ( const auto& f : many ) {
        EXPECT_TRUE( is_well_formed( f, sig ) );
        EXPECT_LE( qr( f ), 2u );
        with_rank_two += qr( f ) == 2;
    }
    EXPECT_GT( with_rank_two, 0u );
    Signature fsig( {}, { { "f", 1, PwlModulus::identity() } }, { "c" } );
    for ( const auto& f : sample_formulas( fsig, 1, 200, 8 ) ) {
        EXPECT_TRUE( is_well_formed( f, fsig ) );
        EXPECT_LE( term_depth( f ), 1u );
    }
}
