#pragma once

#include "cfo/structures/structure.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace cfo
{

struct Violation
{
    enum class Kind
    {
        NonzeroSelfDistance,
        NegativeDistance,
        Asymmetric,
        ZeroDistance,
        DiameterBound,
        Triangle,
        PredicateRange,
        PredicateModulus,
        FunctionModulus
    };

    Kind kind;
    std::string symbol;
    Tuple left;
    Tuple right;
    Rational observed;
    Rational bound;
    std::string message;
};

inline const char* kind_name( Violation::Kind k )
{
    switch ( k ) {
        case Violation::Kind::NonzeroSelfDistance: return "self-distance";
        case Violation::Kind::NegativeDistance: return "negative-distance";
        case Violation::Kind::Asymmetric: return "symmetry";
        case Violation::Kind::ZeroDistance: return "zero-distance";
        case Violation::Kind::DiameterBound: return "diameter-bound";
        case Violation::Kind::Triangle: return "triangle-inequality";
        case Violation::Kind::PredicateRange: return "predicate-range";
        case Violation::Kind::PredicateModulus: return "predicate-modulus";
        case Violation::Kind::FunctionModulus: return "function-modulus";
    }
    return "?";
}

struct ValidationReport
{
    std::vector< Violation > violations;
    // Distinct points at distance 0 were permitted by the pseudometric flag.
    bool nonconforming_pseudometric = false;

    [[nodiscard]] bool ok() const { return violations.empty(); }

    [[nodiscard]] std::string to_string() const
    {
        std::ostringstream os;
        if ( ok() )
            os << "valid";
        else
            os << violations.size() << " violation(s)";
        if ( nonconforming_pseudometric )
            os << " (pseudometric: non-conforming)";
        os << "\n";
        for ( const auto& v : violations )
            os << "  " << kind_name( v.kind ) << ": " << v.message << "\n";
        return os.str();
    }
};

/*
 * Checks every condition on a finite metric structure and reports the first
 * witness for each failed check (per symbol for table checks). Tuples are
 * compared in the max metric.
 */
inline ValidationReport validate( const MetricStructure& s )
{
    ValidationReport rep;
    const std::size_t n = s.size();
    auto add = [ & ]( Violation::Kind k, std::string sym, Tuple l, Tuple r, Rational obs, Rational bound,
                      std::string msg ) {
        rep.violations.push_back( { k, std::move( sym ), std::move( l ), std::move( r ), obs, bound, std::move( msg ) } );
    };

    bool found[ 6 ] = {};
    for ( Point a = 0; a < n; ++a )
        for ( Point b = 0; b < n; ++b ) {
            const Rational& d = s.dist( a, b );
            auto ab = "d(" + std::to_string( a ) + "," + std::to_string( b ) + ") = " + d.to_string();
            if ( a == b && !d.is_zero() && !found[ 0 ] ) {
                found[ 0 ] = true;
                add( Violation::Kind::NonzeroSelfDistance, "d", { a }, { b }, d, 0, ab + ", expected 0" );
            }
            if ( d.sign() < 0 && !found[ 1 ] ) {
                found[ 1 ] = true;
                add( Violation::Kind::NegativeDistance, "d", { a }, { b }, d, 0, ab + " is negative" );
            }
            if ( d != s.dist( b, a ) && !found[ 2 ] ) {
                found[ 2 ] = true;
                add( Violation::Kind::Asymmetric, "d", { a }, { b }, d, s.dist( b, a ),
                     ab + " but d(" + std::to_string( b ) + "," + std::to_string( a ) + ") = " + s.dist( b, a ).to_string() );
            }
            if ( a != b && d.is_zero() ) {
                if ( s.pseudometric() )
                    rep.nonconforming_pseudometric = true;
                else if ( !found[ 3 ] ) {
                    found[ 3 ] = true;
                    add( Violation::Kind::ZeroDistance, "d", { a }, { b }, d, 0, ab + " for distinct points" );
                }
            }
            if ( d > 1 && !found[ 4 ] ) {
                found[ 4 ] = true;
                add( Violation::Kind::DiameterBound, "d", { a }, { b }, d, 1, ab + " exceeds the bound 1" );
            }
        }
    for ( Point a = 0; a < n && !found[ 5 ]; ++a )
        for ( Point b = 0; b < n && !found[ 5 ]; ++b )
            for ( Point c = 0; c < n && !found[ 5 ]; ++c ) {
                Rational via = s.dist( a, b ) + s.dist( b, c );
                if ( s.dist( a, c ) > via ) {
                    found[ 5 ] = true;
                    add( Violation::Kind::Triangle, "d", { a, b, c }, {}, s.dist( a, c ), via,
                         "witness (" + std::to_string( a ) + "," + std::to_string( b ) + "," + std::to_string( c ) +
                             "): d(" + std::to_string( a ) + "," + std::to_string( c ) + ") = " +
                             s.dist( a, c ).to_string() + " > " + via.to_string() + " = d(" + std::to_string( a ) + "," +
                             std::to_string( b ) + ") + d(" + std::to_string( b ) + "," + std::to_string( c ) + ")" );
                }
            }

    auto tuple_dist = [ & ]( const Tuple& x, const Tuple& y ) {
        Rational m = 0;
        for ( std::size_t i = 0; i < x.size(); ++i )
            m = std::max( m, s.dist( x[ i ], y[ i ] ) );
        return m;
    };

    const auto& sig = s.signature();
    for ( std::size_t pi = 0; pi < sig.predicates().size(); ++pi ) {
        const auto& spec = sig.predicates()[ pi ];
        const auto& table = s.predicate_table( pi );
        for ( std::size_t i = 0; i < table.size(); ++i )
            if ( table[ i ].sign() < 0 || table[ i ] > 1 ) {
                auto t = detail::tuple_at( i, n, spec.arity );
                add( Violation::Kind::PredicateRange, spec.name, t, {}, table[ i ], table[ i ].sign() < 0 ? 0 : 1,
                     spec.name + detail::tuple_key( t ) + " = " + table[ i ].to_string() + " outside [0,1]" );
                break;
            }
        bool done = false;
        for ( std::size_t i = 0; i < table.size() && !done; ++i )
            for ( std::size_t j = i + 1; j < table.size() && !done; ++j ) {
                auto x = detail::tuple_at( i, n, spec.arity ), y = detail::tuple_at( j, n, spec.arity );
                Rational diff = abs( table[ i ] - table[ j ] );
                Rational t = tuple_dist( x, y );
                Rational bound = spec.modulus( t );
                if ( diff > bound ) {
                    done = true;
                    add( Violation::Kind::PredicateModulus, spec.name, x, y, diff, bound,
                         "witness " + detail::tuple_key( x ) + " vs " + detail::tuple_key( y ) + ": |" +
                             table[ i ].to_string() + " - " + table[ j ].to_string() + "| = " + diff.to_string() +
                             " > " + bound.to_string() + " = modulus(" + t.to_string() + ")" );
                }
            }
    }
    for ( std::size_t fi = 0; fi < sig.functions().size(); ++fi ) {
        const auto& spec = sig.functions()[ fi ];
        const auto& table = s.function_table( fi );
        bool done = false;
        for ( std::size_t i = 0; i < table.size() && !done; ++i )
            for ( std::size_t j = i + 1; j < table.size() && !done; ++j ) {
                auto x = detail::tuple_at( i, n, spec.arity ), y = detail::tuple_at( j, n, spec.arity );
                const Rational& gap = s.dist( table[ i ], table[ j ] );
                Rational t = tuple_dist( x, y );
                Rational bound = spec.modulus( t );
                if ( gap > bound ) {
                    done = true;
                    add( Violation::Kind::FunctionModulus, spec.name, x, y, gap, bound,
                         "witness " + detail::tuple_key( x ) + " vs " + detail::tuple_key( y ) + ": d(" +
                             std::to_string( table[ i ] ) + "," + std::to_string( table[ j ] ) + ") = " + gap.to_string() +
                             " > " + bound.to_string() + " = modulus(" + t.to_string() + ")" );
                }
            }
    }
    return rep;
}

} // namespace cfo
