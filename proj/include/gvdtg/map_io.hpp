#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "gvdtg/grid.hpp"

namespace gvdtg {

/// Input error carrying the 1-based line it was detected on (0 when not line-bound).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Text maps: "GRID <width> <height> <resolution_m>" then `height` rows of
// `width` characters: '?' unknown, '.' free, '#' occupied. Row i is y = i.
OccupancyGrid parse_grid_text(std::istream& in, const std::string& source = "<stream>");
void write_grid_text(std::ostream& out, const OccupancyGrid& grid);

// Binary PGM (P5, maxval <= 255): < 64 occupied, > 196 free, otherwise unknown.
OccupancyGrid parse_pgm(std::istream& in, double resolution, const std::string& source = "<stream>");

/// Loads a map file, dispatching on the magic ("GRID" or "P5").
OccupancyGrid load_map(const std::string& path, double pgm_resolution = 0.05);
void save_map(const std::string& path, const OccupancyGrid& grid);

char state_char(CellState s);

}  // namespace gvdtg
