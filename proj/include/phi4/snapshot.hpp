#pragma once

#include <string>

#include "phi4/randomcluster.hpp"

namespace phi4 {

// Binary spin snapshot: magic, region header, |Lambda| doubles.
void save_spins_binary(const std::string& path, const Region& r, const SpinConfig& phi);
// CSV: "# region ..." header line, then index, coordinates, value.
void save_spins_csv(const std::string& path, const Region& r, const SpinConfig& phi);

struct SpinSnapshot {
    ShapeSpec shape;
    SpinConfig phi;
};
SpinSnapshot load_spins_binary(const std::string& path);
SpinSnapshot load_spins_csv(const std::string& path);

// Region header, bit-packed omega, a as doubles.
void save_rc_state(const std::string& path, const Region& r, const RCState& s);

struct RCSnapshot {
    ShapeSpec shape;
    RCState state;
};
RCSnapshot load_rc_state(const std::string& path);

}  // namespace phi4
