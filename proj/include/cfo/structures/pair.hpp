#pragma once

#include "cfo/structures/structure.hpp"

#include <memory>

namespace cfo
{

// Two structures over one signature; their domains are kept apart by side.
class NamedPair
{
    std::shared_ptr< const MetricStructure > _left;
    std::shared_ptr< const MetricStructure > _right;

public:
    NamedPair( MetricStructure left, MetricStructure right )
        : _left{ std::make_shared< const MetricStructure >( std::move( left ) ) },
          _right{ std::make_shared< const MetricStructure >( std::move( right ) ) }
    {
        if ( !( _left->signature() == _right->signature() ) )
            throw InvalidArgument( "pair structures have different signatures" );
    }

    [[nodiscard]] const MetricStructure& left() const { return *_left; }
    [[nodiscard]] const MetricStructure& right() const { return *_right; }
    [[nodiscard]] const Signature& signature() const { return _left->signature(); }

    [[nodiscard]] NamedPair swapped() const { return NamedPair( *_right, *_left ); }
};

} // namespace cfo
