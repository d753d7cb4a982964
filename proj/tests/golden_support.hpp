#ifndef BSV_TESTS_GOLDEN_SUPPORT_HPP
#define BSV_TESTS_GOLDEN_SUPPORT_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsv/tables.hpp"

#ifndef BSV_GOLDEN_DIR
#define BSV_GOLDEN_DIR "tests/golden"
#endif

namespace golden {

/// Rows of tests/golden/tableN.json, in file order.
inline std::vector<bsv::TableRow> load(int id) {
  const std::string path = std::string(BSV_GOLDEN_DIR) + "/table" + std::to_string(id) + ".json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.at("id").get<int>() != id) throw std::runtime_error(path + ": id mismatch");
  std::vector<bsv::TableRow> rows;
  for (const auto& r : j.at("rows")) {
    rows.push_back({r.at(0).get<std::string>(), r.at(1).get<std::vector<std::string>>()});
  }
  return rows;
}

/// First difference between a generated table and its fixture, if any.
inline std::optional<std::string> diff(const bsv::TableReport& t, const std::vector<bsv::TableRow>& expected) {
  auto cells = [](const std::vector<std::string>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " | " : "") << v[i];
    return os.str();
  };
  if (t.rows.size() != expected.size()) {
    return "table " + std::to_string(t.id) + ": " + std::to_string(t.rows.size()) + " rows, fixture has " +
           std::to_string(expected.size());
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& got = t.rows[i];
    const auto& want = expected[i];
    if (got.label != want.label) return "row " + std::to_string(i) + ": label '" + got.label + "' != '" + want.label + "'";
    if (got.cells != want.cells) return want.label + ": [" + cells(got.cells) + "] != [" + cells(want.cells) + "]";
  }
  return std::nullopt;
}

}  // namespace golden

#endif  // BSV_TESTS_GOLDEN_SUPPORT_HPP
