#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bandembed/bandlimited.hpp"
#include "bandembed/interpolation.hpp"
#include "bandembed/simplicial.hpp"
#include "bandembed/systems.hpp"
#include "bandembed/tiling.hpp"
#include "bandembed/weights.hpp"

namespace bandembed {

using Json = nlohmann::ordered_json;

Json to_json(const NodeMultiset& m);
NodeMultiset multiset_from_json(const Json& j);

/// Only tone, sinc and bump kernels round-trip; interpolation kernels are
/// written with their multiset.
Json to_json(const BandSignal& s);
BandSignal signal_from_json(const Json& j);

Json to_json(const SampleTrack& t);
SampleTrack track_from_json(const Json& j);

Json to_json(const MarkerSeq& m);
MarkerSeq markers_from_json(const Json& j);

Json to_json(const Tiling& t);

Json to_json(const WeightParams& p);
WeightParams weight_params_from_json(const Json& j);

Json to_json(const WeightReport& r);

Json to_json(const SimplicialMap& m);
SimplicialMap map_from_json(const Json& j);

Json to_json(const DiscreteSignal& s);

/// Rows "t,re,im" for the grid lo, lo + step, ..., <= hi.
std::string signal_csv(const BandSignal& s, double lo, double hi, double step);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

}  // namespace bandembed
