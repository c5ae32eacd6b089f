#include "aiknn/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <system_error>

#include "aiknn/error.hpp"

namespace aiknn {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      return out;
    }
    start = comma + 1;
  }
}

struct Layout {
  std::vector<std::size_t> x_columns;  // x_columns[j] = column of x{j+1}
  std::optional<std::size_t> y_column;
  std::size_t width = 0;
};

Layout parse_header(std::string_view header) {
  const auto names = split(header);
  Layout layout;
  layout.width = names.size();
  std::map<std::size_t, std::size_t> xs;
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string_view name = names[c];
    if (name == "y") {
      if (layout.y_column) {
        throw InvalidInput("csv header repeats column 'y'");
      }
      layout.y_column = c;
      continue;
    }
    std::size_t index = 0;
    if (name.size() >= 2 && name[0] == 'x') {
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || ptr != name.data() + name.size() || index == 0) {
        index = 0;
      }
    }
    if (index == 0) {
      throw InvalidInput("csv header has unexpected column '" + std::string(name) + "'");
    }
    if (!xs.emplace(index, c).second) {
      throw InvalidInput("csv header repeats column '" + std::string(name) + "'");
    }
  }
  if (xs.empty()) {
    throw InvalidInput("csv header has no coordinate columns x1..xd");
  }
  std::size_t expected = 1;
  for (const auto& [index, column] : xs) {
    if (index != expected++) {
      throw InvalidInput("csv coordinate columns must be x1..xd without gaps");
    }
    layout.x_columns.push_back(column);
  }
  return layout;
}

double parse_response(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const char* begin = text.data();
  if (begin != end && *begin == '+') {
    ++begin;
  }
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw InvalidInput("csv line " + std::to_string(line_no) + ": bad response '" +
                       std::string(text) + "'");
  }
  return v;
}

template <class RowFn>
Layout read_rows(std::istream& in, RowFn&& on_row) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Layout> layout;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    if (!layout) {
      layout = parse_header(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != layout->width) {
      throw InvalidInput("csv line " + std::to_string(line_no) + ": expected " +
                         std::to_string(layout->width) + " fields, got " +
                         std::to_string(cells.size()));
    }
    std::vector<Scalar> coords;
    coords.reserve(layout->x_columns.size());
    for (std::size_t column : layout->x_columns) {
      try {
        coords.push_back(parse_scalar(cells[column]));
      } catch (const InvalidInput& e) {
        throw InvalidInput("csv line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    on_row(*layout, Point(std::move(coords)), cells, line_no);
  }
  if (!layout) {
    throw InvalidInput("csv input is empty (missing header)");
  }
  return *layout;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open '" + path.string() + "'");
  }
  return in;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::vector<Point> points;
  std::vector<double> responses;
  const Layout layout = read_rows(in, [&](const Layout& l, Point p, const auto& cells,
                                          std::size_t line_no) {
    if (!l.y_column) {
      throw InvalidInput("dataset csv needs a response column 'y'");
    }
    responses.push_back(parse_response(cells[*l.y_column], line_no));
    points.push_back(std::move(p));
  });
  if (!layout.y_column) {
    throw InvalidInput("dataset csv needs a response column 'y'");
  }
  if (points.empty()) {
    throw InvalidInput("dataset csv has no rows");
  }
  return Dataset(std::move(points), std::move(responses));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_dataset_csv(in);
}

std::vector<Point> read_points_csv(std::istream& in, std::optional<std::size_t> dim) {
  std::vector<Point> points;
  const Layout layout = read_rows(
      in, [&](const Layout&, Point p, const auto&, std::size_t) { points.push_back(std::move(p)); });
  if (dim && layout.x_columns.size() != *dim) {
    throw InvalidInput("dimension mismatch: query csv has " +
                       std::to_string(layout.x_columns.size()) + " coordinate columns, expected " +
                       std::to_string(*dim));
  }
  return points;
}

std::vector<Point> read_points_csv(const std::filesystem::path& path,
                                   std::optional<std::size_t> dim) {
  auto in = open_input(path);
  return read_points_csv(in, dim);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InvalidInput("cannot write '" + tmp.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw InvalidInput("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInput("cannot move output into place at '" + path.string() + "'");
  }
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace aiknn
