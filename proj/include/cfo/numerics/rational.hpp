#pragma once

#include "cfo/error.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

namespace cfo
{

/*
 * Exact rational number p/q with q > 0 and gcd(p, q) = 1.
 *
 * Numerator and denominator are 64-bit; every operation is carried out in
 * 128-bit intermediates and reduced before narrowing. A result that does not
 * fit throws ArithmeticOverflow; nothing is ever rounded.
 */
class Rational
{
    std::int64_t _num = 0;
    std::int64_t _den = 1;

    using wide = __int128;

    static wide gcd_wide( wide a, wide b )
    {
        if ( a < 0 )
            a = -a;
        if ( b < 0 )
            b = -b;
        while ( b != 0 ) {
            wide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::int64_t narrow( wide v )
    {
        if ( v > std::numeric_limits< std::int64_t >::max() || v < -std::numeric_limits< std::int64_t >::max() )
            throw ArithmeticOverflow( "rational arithmetic overflowed 64 bits" );
        return static_cast< std::int64_t >( v );
    }

    static Rational from_wide( wide num, wide den )
    {
        if ( den == 0 )
            throw InvalidArgument( "rational with zero denominator" );
        if ( den < 0 ) {
            num = -num;
            den = -den;
        }
        wide g = gcd_wide( num, den );
        if ( g > 1 ) {
            num /= g;
            den /= g;
        }
        Rational r;
        r._num = narrow( num );
        r._den = narrow( den );
        return r;
    }

public:
    constexpr Rational() = default;
    constexpr Rational( std::int64_t value ) : _num{ value } {} // NOLINT(implicit)

    Rational( std::int64_t num, std::int64_t den ) { *this = from_wide( num, den ); }

    [[nodiscard]] std::int64_t num() const { return _num; }
    [[nodiscard]] std::int64_t den() const { return _den; }

    [[nodiscard]] bool is_integer() const { return _den == 1; }
    [[nodiscard]] bool is_zero() const { return _num == 0; }
    [[nodiscard]] int sign() const { return ( _num > 0 ) - ( _num < 0 ); }

    friend Rational operator+( const Rational& a, const Rational& b )
    {
        if ( a._den == b._den )
            return from_wide( wide( a._num ) + b._num, a._den );
        return from_wide( wide( a._num ) * b._den + wide( b._num ) * a._den, wide( a._den ) * b._den );
    }

    friend Rational operator-( const Rational& a, const Rational& b )
    {
        if ( a._den == b._den )
            return from_wide( wide( a._num ) - b._num, a._den );
        return from_wide( wide( a._num ) * b._den - wide( b._num ) * a._den, wide( a._den ) * b._den );
    }

    friend Rational operator*( const Rational& a, const Rational& b )
    {
        return from_wide( wide( a._num ) * b._num, wide( a._den ) * b._den );
    }

    friend Rational operator/( const Rational& a, const Rational& b )
    {
        if ( b._num == 0 )
            throw InvalidArgument( "rational division by zero" );
        return from_wide( wide( a._num ) * b._den, wide( a._den ) * b._num );
    }

    Rational operator-() const
    {
        Rational r;
        r._num = -_num;
        r._den = _den;
        return r;
    }

    Rational& operator+=( const Rational& o ) { return *this = *this + o; }
    Rational& operator-=( const Rational& o ) { return *this = *this - o; }
    Rational& operator*=( const Rational& o ) { return *this = *this * o; }
    Rational& operator/=( const Rational& o ) { return *this = *this / o; }

    friend bool operator==( const Rational& a, const Rational& b ) = default;

    friend std::strong_ordering operator<=>( const Rational& a, const Rational& b )
    {
        if ( a._den == b._den )
            return a._num <=> b._num;
        wide lhs = wide( a._num ) * b._den;
        wide rhs = wide( b._num ) * a._den;
        if ( lhs < rhs )
            return std::strong_ordering::less;
        if ( lhs > rhs )
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // "p" for integers, "p/q" otherwise.
    [[nodiscard]] std::string to_string() const
    {
        if ( _den == 1 )
            return std::to_string( _num );
        return std::to_string( _num ) + "/" + std::to_string( _den );
    }

    [[nodiscard]] double to_double() const { return static_cast< double >( _num ) / static_cast< double >( _den ); }

    // Accepts "p", "p/q", and finite decimals "-1.25"; conversion is exact.
    static Rational parse( std::string_view text )
    {
        auto fail = [ & ]() -> Rational {
            throw InvalidArgument( "not a rational number: '" + std::string( text ) + "'" );
        };
        std::size_t i = 0;
        bool negative = false;
        if ( i < text.size() && ( text[ i ] == '-' || text[ i ] == '+' ) ) {
            negative = text[ i ] == '-';
            ++i;
        }
        auto digits = [ & ]( wide& out, std::size_t& count ) {
            out = 0;
            count = 0;
            while ( i < text.size() && text[ i ] >= '0' && text[ i ] <= '9' ) {
                out = out * 10 + ( text[ i ] - '0' );
                if ( out > std::numeric_limits< std::int64_t >::max() )
                    throw ArithmeticOverflow( "rational literal too large: '" + std::string( text ) + "'" );
                ++i;
                ++count;
            }
        };
        wide whole = 0;
        std::size_t n_whole = 0;
        digits( whole, n_whole );
        if ( i < text.size() && text[ i ] == '/' ) {
            ++i;
            wide den = 0;
            std::size_t n_den = 0;
            digits( den, n_den );
            if ( n_whole == 0 || n_den == 0 || i != text.size() || den == 0 )
                return fail();
            return from_wide( negative ? -whole : whole, den );
        }
        wide frac = 0;
        wide scale = 1;
        std::size_t n_frac = 0;
        if ( i < text.size() && text[ i ] == '.' ) {
            ++i;
            digits( frac, n_frac );
            for ( std::size_t k = 0; k < n_frac; ++k ) {
                scale *= 10;
                if ( scale > std::numeric_limits< std::int64_t >::max() )
                    throw ArithmeticOverflow( "decimal literal too precise: '" + std::string( text ) + "'" );
            }
        }
        if ( ( n_whole == 0 && n_frac == 0 ) || i != text.size() )
            return fail();
        wide num = whole * scale + frac;
        return from_wide( negative ? -num : num, scale );
    }
};

inline Rational abs( const Rational& r ) { return r.sign() < 0 ? -r : r; }

// a -. b = max(0, a - b)
inline Rational monus( const Rational& a, const Rational& b )
{
    Rational d = a - b;
    return d.sign() < 0 ? Rational{ 0 } : d;
}

inline std::ostream& operator<<( std::ostream& os, const Rational& r ) { return os << r.to_string(); }

} // namespace cfo

template <>
struct std::hash< cfo::Rational >
{
    std::size_t operator()( const cfo::Rational& r ) const noexcept
    {
        std::size_t h = std::hash< std::int64_t >{}( r.num() );
        return h ^ ( std::hash< std::int64_t >{}( r.den() ) + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 ) );
    }
};
