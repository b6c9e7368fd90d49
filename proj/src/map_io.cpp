#include "gvdtg/map_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace gvdtg {

namespace {

template <typename T>
bool parse_number(const std::string& tok, T& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// from_chars for double is missing on some libstdc++ builds; strtod keeps it portable.
bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

}  // namespace

char state_char(CellState s) {
  switch (s) {
    case CellState::kFree: return '.';
    case CellState::kOccupied: return '#';
    default: return '?';
  }
}

OccupancyGrid parse_grid_text(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  // Header: first non-empty line.
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream header(line);
  std::vector<std::string> toks;
  for (std::string t; header >> t;) toks.push_back(t);
  if (toks.empty()) throw ParseError(source, line_no, "empty map file");
  if (toks[0] != "GRID") throw ParseError(source, line_no, "bad header token '" + toks[0] + "', expected 'GRID'");
  if (toks.size() != 4) {
    throw ParseError(source, line_no, "header needs 'GRID <width> <height> <resolution>', got " +
                                          std::to_string(toks.size()) + " tokens");
  }
  int width = 0, height = 0;
  double res = 0.0;
  if (!parse_number(toks[1], width) || width <= 0) throw ParseError(source, line_no, "bad width token '" + toks[1] + "'");
  if (!parse_number(toks[2], height) || height <= 0) throw ParseError(source, line_no, "bad height token '" + toks[2] + "'");
  if (!parse_double(toks[3], res) || !(res > 0.0)) throw ParseError(source, line_no, "bad resolution token '" + toks[3] + "'");

  OccupancyGrid grid(width, height, res);
  for (int y = 0; y < height; ++y) {
    if (!std::getline(in, line)) {
      throw ParseError(source, line_no + 1, "expected " + std::to_string(height) + " rows, got " + std::to_string(y));
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != width) {
      throw ParseError(source, line_no, "row has " + std::to_string(line.size()) + " cells, expected " + std::to_string(width));
    }
    for (int x = 0; x < width; ++x) {
      switch (line[static_cast<std::size_t>(x)]) {
        case '?': grid.set(x, y, CellState::kUnknown); break;
        case '.': grid.set(x, y, CellState::kFree); break;
        case '#': grid.set(x, y, CellState::kOccupied); break;
        default:
          throw ParseError(source, line_no, std::string("bad cell character '") + line[static_cast<std::size_t>(x)] +
                                                "' at column " + std::to_string(x + 1));
      }
    }
  }
  return grid;
}

void write_grid_text(std::ostream& out, const OccupancyGrid& grid) {
  out << "GRID " << grid.width() << ' ' << grid.height() << ' ' << grid.resolution() << '\n';
  std::string row(static_cast<std::size_t>(grid.width()), '?');
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) row[static_cast<std::size_t>(x)] = state_char(grid.at(x, y));
    out << row << '\n';
  }
}

OccupancyGrid parse_pgm(std::istream& in, double resolution, const std::string& source) {
  // Header tokens may be separated by whitespace and '#' comments.
  auto next_token = [&]() {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    return tok;
  };
  const std::string magic = next_token();
  if (magic != "P5") throw ParseError(source, 1, "bad PGM magic '" + magic + "', expected 'P5'");
  int width = 0, height = 0, maxval = 0;
  const std::string ws = next_token(), hs = next_token(), ms = next_token();
  if (!parse_number(ws, width) || width <= 0) throw ParseError(source, 0, "bad PGM width '" + ws + "'");
  if (!parse_number(hs, height) || height <= 0) throw ParseError(source, 0, "bad PGM height '" + hs + "'");
  if (!parse_number(ms, maxval) || maxval <= 0 || maxval > 255) throw ParseError(source, 0, "bad PGM maxval '" + ms + "'");

  OccupancyGrid grid(width, height, resolution);
  std::vector<unsigned char> data(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) {
    throw ParseError(source, 0, "truncated PGM raster");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int v = data[i];
    grid.set(grid.cell_of(i), v < 64 ? CellState::kOccupied : (v > 196 ? CellState::kFree : CellState::kUnknown));
  }
  return grid;
}

OccupancyGrid load_map(const std::string& path, double pgm_resolution) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  in.clear();
  in.seekg(0);
  if (magic[0] == 'P' && magic[1] == '5') return parse_pgm(in, pgm_resolution, path);
  return parse_grid_text(in, path);
}

void save_map(const std::string& path, const OccupancyGrid& grid) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot write file");
  write_grid_text(out, grid);
}

}  // namespace gvdtg
