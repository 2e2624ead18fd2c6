#pragma once

#include "cfo/error.hpp"
#include "cfo/numerics/rational.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cfo
{

/*
 * A modulus of uniform continuity in canonical form: a non-decreasing concave
 * piecewise-linear function [0, inf) -> [0, inf) with rational breakpoints,
 * starting at (0, 0) and continuing with `final_slope` after the last
 * breakpoint.
 *
 * Concavity together with f(0) = 0 gives subadditivity, so every value of this
 * type is a modulus in the usual sense. The canonical form has no collinear
 * interior breakpoints, which makes structural equality coincide with
 * pointwise equality.
 */
class PwlModulus
{
public:
    struct Point
    {
        Rational x;
        Rational y;

        friend bool operator==( const Point&, const Point& ) = default;
    };

private:
    std::vector< Point > _points{ Point{ 0, 0 } };
    Rational _final_slope{ 0 };

    static Rational slope( const Point& a, const Point& b ) { return ( b.y - a.y ) / ( b.x - a.x ); }

    void canonicalize()
    {
        std::vector< Point > out;
        out.reserve( _points.size() );
        for ( const auto& p : _points ) {
            while ( out.size() >= 2 && slope( out[ out.size() - 2 ], out.back() ) == slope( out.back(), p ) )
                out.pop_back();
            out.push_back( p );
        }
        while ( out.size() >= 2 && slope( out[ out.size() - 2 ], out.back() ) == _final_slope )
            out.pop_back();
        _points = std::move( out );
    }

public:
    // The zero modulus.
    PwlModulus() = default;

    // Validates and canonicalizes; throws InvalidArgument if the data is not
    // a non-decreasing concave function through the origin.
    PwlModulus( std::vector< Point > points, Rational final_slope )
        : _points{ std::move( points ) }, _final_slope{ final_slope }
    {
        if ( _points.empty() || _points.front() != Point{ 0, 0 } )
            throw InvalidArgument( "modulus breakpoints must start at (0,0)" );
        if ( _final_slope.sign() < 0 )
            throw InvalidArgument( "modulus final slope must be >= 0" );
        for ( std::size_t i = 1; i < _points.size(); ++i ) {
            if ( _points[ i ].x <= _points[ i - 1 ].x )
                throw InvalidArgument( "modulus breakpoints must have strictly increasing inputs" );
            if ( _points[ i ].y < _points[ i - 1 ].y )
                throw InvalidArgument( "modulus must be non-decreasing" );
        }
        for ( std::size_t i = 2; i < _points.size(); ++i )
            if ( slope( _points[ i - 1 ], _points[ i ] ) > slope( _points[ i - 2 ], _points[ i - 1 ] ) )
                throw InvalidArgument( "modulus must be concave (segment slopes non-increasing)" );
        if ( _points.size() >= 2 && _final_slope > slope( _points[ _points.size() - 2 ], _points.back() ) )
            throw InvalidArgument( "modulus final slope exceeds last segment slope (not concave)" );
        canonicalize();
    }

    static PwlModulus zero() { return {}; }
    static PwlModulus identity() { return linear( 1 ); }
    static PwlModulus linear( Rational slope ) { return PwlModulus( { Point{ 0, 0 } }, slope ); }

    // t |-> min(slope * t, cap)
    static PwlModulus capped_linear( Rational slope, Rational cap = 1 )
    {
        if ( slope.is_zero() || cap.is_zero() )
            return zero();
        return PwlModulus( { Point{ 0, 0 }, Point{ cap / slope, cap } }, 0 );
    }

    [[nodiscard]] const std::vector< Point >& breakpoints() const { return _points; }
    [[nodiscard]] const Rational& final_slope() const { return _final_slope; }
    [[nodiscard]] const Point& last() const { return _points.back(); }

    [[nodiscard]] Rational operator()( const Rational& t ) const
    {
        if ( t.sign() < 0 )
            throw InvalidArgument( "modulus evaluated at negative input " + t.to_string() );
        // Breakpoint lists are short; binary search buys nothing.
        for ( std::size_t i = 1; i < _points.size(); ++i ) {
            const auto& a = _points[ i - 1 ];
            const auto& b = _points[ i ];
            if ( t <= b.x )
                return a.y + slope( a, b ) * ( t - a.x );
        }
        return last().y + _final_slope * ( t - last().x );
    }

    // Slope of the segment starting at t (right derivative).
    [[nodiscard]] Rational slope_after( const Rational& t ) const
    {
        for ( std::size_t i = 1; i < _points.size(); ++i )
            if ( t < _points[ i ].x )
                return slope( _points[ i - 1 ], _points[ i ] );
        return _final_slope;
    }

    // Eventually constant.
    [[nodiscard]] bool bounded() const { return _final_slope.is_zero(); }

    [[nodiscard]] bool is_identity() const { return _points.size() == 1 && _final_slope == 1; }
    [[nodiscard]] bool is_zero() const { return _points.size() == 1 && _final_slope.is_zero(); }

    // Smallest t with f(t) = y, if f reaches y.
    [[nodiscard]] std::optional< Rational > preimage( const Rational& y ) const
    {
        if ( y.sign() <= 0 )
            return Rational{ 0 };
        for ( std::size_t i = 1; i < _points.size(); ++i ) {
            const auto& a = _points[ i - 1 ];
            const auto& b = _points[ i ];
            if ( y <= b.y && y > a.y )
                return a.x + ( y - a.y ) / slope( a, b );
        }
        if ( y > last().y && _final_slope.sign() > 0 )
            return last().x + ( y - last().y ) / _final_slope;
        if ( y == last().y )
            return last().x;
        return std::nullopt;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string s = "{";
        for ( std::size_t i = 0; i < _points.size(); ++i ) {
            if ( i )
                s += ", ";
            s += "(" + _points[ i ].x.to_string() + "," + _points[ i ].y.to_string() + ")";
        }
        return s + "; slope " + _final_slope.to_string() + "}";
    }

    friend bool operator==( const PwlModulus&, const PwlModulus& ) = default;
};

inline std::ostream& operator<<( std::ostream& os, const PwlModulus& m ) { return os << m.to_string(); }

namespace detail
{

inline std::vector< Rational > merged_inputs( const PwlModulus& a, const PwlModulus& b )
{
    std::vector< Rational > xs;
    for ( const auto& p : a.breakpoints() )
        xs.push_back( p.x );
    for ( const auto& p : b.breakpoints() )
        xs.push_back( p.x );
    std::sort( xs.begin(), xs.end() );
    xs.erase( std::unique( xs.begin(), xs.end() ), xs.end() );
    return xs;
}

} // namespace detail

/*
 * Least non-decreasing concave function dominating every sample, whose
 * eventual slope is `tail_slope` and which stays above the ray of that slope
 * from the last sample. Equivalently the infimum of all affine majorants
 * a*t + b (a >= tail_slope, b >= 0) of the samples.
 */
inline PwlModulus concave_envelope( std::vector< PwlModulus::Point > samples, const Rational& tail_slope )
{
    using Point = PwlModulus::Point;
    if ( tail_slope.sign() < 0 )
        throw InvalidArgument( "envelope tail slope must be >= 0" );
    bool has_origin = false;
    for ( const auto& s : samples ) {
        if ( s.x.sign() < 0 || s.y.sign() < 0 )
            throw InvalidArgument( "envelope samples must be non-negative" );
        if ( s.x.is_zero() && !s.y.is_zero() )
            throw InvalidArgument( "envelope sample at 0 must be (0,0)" );
        has_origin = has_origin || ( s.x.is_zero() && s.y.is_zero() );
    }
    if ( !has_origin )
        throw InvalidArgument( "envelope samples must include (0,0)" );

    std::sort( samples.begin(), samples.end(), []( const Point& a, const Point& b ) {
        return a.x < b.x || ( a.x == b.x && a.y > b.y );
    } );
    // Running maximum: the least non-decreasing majorant has these vertices.
    std::vector< Point > pts;
    Rational running = 0;
    for ( const auto& s : samples ) {
        if ( !pts.empty() && pts.back().x == s.x )
            continue;
        running = std::max( running, s.y );
        pts.push_back( Point{ s.x, running } );
    }

    // Upper hull, then drop trailing vertices that lie under the tail ray.
    std::vector< Point > hull;
    auto cross = []( const Point& o, const Point& a, const Point& b ) {
        return ( a.x - o.x ) * ( b.y - o.y ) - ( a.y - o.y ) * ( b.x - o.x );
    };
    for ( const auto& p : pts ) {
        while ( hull.size() >= 2 && cross( hull[ hull.size() - 2 ], hull.back(), p ).sign() >= 0 )
            hull.pop_back();
        hull.push_back( p );
    }
    while ( hull.size() >= 2 ) {
        const auto& a = hull[ hull.size() - 2 ];
        const auto& b = hull.back();
        if ( ( b.y - a.y ) / ( b.x - a.x ) >= tail_slope )
            break;
        hull.pop_back();
    }
    return PwlModulus( std::move( hull ), tail_slope );
}

// outer o inner, exactly.
inline PwlModulus compose( const PwlModulus& outer, const PwlModulus& inner )
{
    std::vector< Rational > xs;
    for ( const auto& p : inner.breakpoints() )
        xs.push_back( p.x );
    for ( const auto& p : outer.breakpoints() )
        if ( auto t = inner.preimage( p.x ) )
            xs.push_back( *t );
    std::sort( xs.begin(), xs.end() );
    xs.erase( std::unique( xs.begin(), xs.end() ), xs.end() );

    std::vector< PwlModulus::Point > pts;
    pts.reserve( xs.size() );
    for ( const auto& x : xs )
        pts.push_back( { x, outer( inner( x ) ) } );
    Rational tail = 0;
    if ( inner.final_slope().sign() > 0 )
        tail = outer.final_slope() * inner.final_slope();
    return PwlModulus( std::move( pts ), tail );
}

// Least canonical modulus dominating both arguments pointwise.
inline PwlModulus modulus_max( const PwlModulus& a, const PwlModulus& b )
{
    if ( a == b )
        return a;
    auto xs = detail::merged_inputs( a, b );
    // Past the last breakpoint both are rays; include their crossing.
    const Rational& x_end = xs.back();
    Rational ya = a( x_end ), yb = b( x_end );
    Rational sa = a.final_slope(), sb = b.final_slope();
    if ( sa != sb && ( ( ya < yb && sa > sb ) || ( yb < ya && sb > sa ) ) )
        xs.push_back( x_end + ( ya - yb ) / ( sb - sa ) );
    std::vector< PwlModulus::Point > pts;
    for ( const auto& x : xs )
        pts.push_back( { x, std::max( a( x ), b( x ) ) } );
    return concave_envelope( std::move( pts ), std::max( sa, sb ) );
}

// a(t) <= b(t) for every t >= 0.
inline bool modulus_leq( const PwlModulus& a, const PwlModulus& b )
{
    for ( const auto& x : detail::merged_inputs( a, b ) )
        if ( a( x ) > b( x ) )
            return false;
    return a.final_slope() <= b.final_slope();
}

// t |-> min(f(t), cap)
inline PwlModulus cap_at( const PwlModulus& f, const Rational& cap = 1 )
{
    return compose( PwlModulus( { { 0, 0 }, { cap, cap } }, 0 ), f );
}

} // namespace cfo
