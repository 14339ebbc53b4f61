#pragma once

#include <map>
#include <optional>
#include <string>

#include "fermsea/model.hpp"

namespace fermsea {

/// Parsed sea definition plus the hopping model when one was given
/// (dispersion seas keep it; jw-check wants it too).
struct SeaDefinition {
  FermiSea sea;
  std::optional<HoppingModel> model;
};

/// Flat key=value file, '#' comments, keys with section prefixes.
///
/// Schema (see README for the full description):
///   sea.dimension   = 2
///   sea.variant     = interval | balls | checkerboard | grid | dispersion
///                     | empty | full
///   sea.kf          = 1.5707963[,1.5707963]      (interval; broadcast if one)
///   sea.center      = 0[,0]                      (interval, optional)
///   sea.balls       = cx,cy,r ; cx,cy,r          (balls)
///   sea.m           = 4                          (checkerboard)
///   sea.resolution  = 8                          (grid)
///   sea.cells       = 0110...                    (grid, resolution^d digits,
///                                                 axis 0 slowest)
///   sea.complement  = 0 | 1                      (optional)
///   model.mu        = 0.0                        (dispersion)
///   model.hopping.<o1[,o2,...]> = re[,im]        (one line per offset;
///                                                 both +a and -a required)
SeaDefinition sea_from_file(const std::string& path);

/// Inline sea spec for the CLI, e.g.
///   interval:kf=1.5707963          checkerboard:m=4
///   ball:center=0;0,r=1            nn:t=1,mu=0
///   grid:file=sea.cfg              dispersion:file=model.cfg
///   empty                          full
/// Key=value pairs separated by ','; vector components inside a value
/// separated by ';'. Append ",complement=1" to flip the indicator.
SeaDefinition sea_from_inline(const std::string& spec, int dimension);

std::map<std::string, std::string> read_key_value_file(const std::string& path);

}  // namespace fermsea
