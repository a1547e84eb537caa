#pragma once

#include <popcent/analysis.hpp>
#include <popcent/graph.hpp>
#include <popcent/sgc.hpp>
#include <popcent/sweep.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace popcent {

/// Serialized sweep layout version. Readers accept any 1.x.
inline constexpr const char *kSweepSchema = "popcent.sweep";
inline constexpr const char *kSweepSchemaVersion = "1.0";

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Edge list with one "u<TAB>v" line per undirected edge, u < v by node index.
void write_edge_list(std::ostream &out, const Graph &g, const NodeMetaTable &meta);

/// id,name,popularity,genres,group with popularity printed to 6 decimal places.
void write_node_meta(std::ostream &out, const NodeMetaTable &meta);

nlohmann::json to_json(const SGCConfig &cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
SGCConfig sgc_config_from_json(const nlohmann::json &j, SGCConfig base = {});

nlohmann::json to_json(const SweepResult &result);
SweepResult sweep_from_json(const nlohmann::json &j);

/// Long form: one "threshold,group,field,value" row per datum, preceded by
/// '#' header lines carrying the schema version and sweep settings. Whole-graph
/// fields use the group name "_graph".
void write_sweep_csv(std::ostream &out, const SweepResult &result);
SweepResult read_sweep_csv(std::istream &in);

nlohmann::json to_json(const LogisticFit &fit);
nlohmann::json to_json(const TransitionReport &report);

/// alpha,beta,rep,seed,transition,curvature rows.
void write_beta_grid_csv(std::ostream &out, const std::vector<BetaGridCell> &cells);
nlohmann::json beta_grid_summary(const std::vector<BetaGridCell> &cells);

void write_degree_ratio_csv(std::ostream &out, const std::vector<DegreeRatioRow> &rows);
nlohmann::json degree_ratio_summary(const std::vector<DegreeRatioRow> &rows);

/// Throws SchemaError unless `version` has major component 1.
void check_schema_version(const std::string &schema, const std::string &version);

} // namespace popcent
