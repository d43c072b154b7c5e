#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclab/barrier.hpp"
#include "fraclab/bump.hpp"
#include "fraclab/front_tracking.hpp"
#include "fraclab/ignition.hpp"
#include "fraclab/monostable.hpp"
#include "fraclab/residual.hpp"
#include "fraclab/solver.hpp"

namespace fraclab {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
/// FNV-1a of the compact dump of `j` (keys are sorted), as 16 hex digits.
std::string config_hash(const Json& j);

/// Parses text, turning syntax errors into ConfigError("line L, column C").
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Field access that remembers what was read, so leftovers can be reported
/// as unknown. Errors carry the dotted path of the field.
class StrictObject {
public:
    StrictObject(const Json& j, std::string path);

    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    std::string string(const std::string& key) const;
    std::string string(const std::string& key, const std::string& fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    bool has(const std::string& key) const;
    const Json& at(const std::string& key) const;
    std::string path_of(const std::string& key) const;
    /// Throws ConfigError naming the first field that was never read.
    void finish() const;

private:
    const Json& j_;
    std::string path_;
    mutable std::set<std::string> used_;
};

Json reaction_to_json(const ReactionSpec& f);
ReactionSpec reaction_from_json(const Json& j, const std::string& path = "reaction");

/// A barrier is stored by its construction parameters plus a "derived"
/// block of computed constants for inspection; loading rebuilds it.
Json barrier_to_json(const IgnitionSuperBarrier& b, const ReactionSpec& f);
Json barrier_to_json(const SelfSimilarSub& b, const ReactionSpec& f);
Json barrier_to_json(const MonostableSub& b, const ReactionSpec& f);

struct LoadedBarrier {
    std::unique_ptr<Barrier> barrier;
    ReactionSpec reaction;
};

/// Kinds: ignition_super, ignition_self_similar_sub, monostable_sub.
LoadedBarrier barrier_from_json(const Json& j, const std::string& path = "barrier");

Json bump_to_json(const BumpProfile& b, const ReactionSpec& f);

Json report_to_json(const ResidualReport& r);

/// Declarative experiment description (schema version 1).
struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string experiment;
    std::optional<SolverConfig> solver;
    std::vector<Json> barriers;  ///< resolved barrier descriptions
    std::vector<double> tracking;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::vector<Json> runs;  ///< sweep members, each a full config
    Json source;             ///< the parsed document, for echo and hashing
};

/// `base_dir` resolves relative barrier file references.
ExperimentConfig parse_experiment(const Json& j, const std::string& base_dir = ".");
ExperimentConfig load_experiment(const std::string& path);

Json solver_to_json(const SolverConfig& c);

/// CSV with a comment line carrying the hash, then "t,x_under,x_over";
/// numbers use %.17g and absent entries "nan".
std::string series_csv(const LevelSetSeries& s, const std::string& hash);

}  // namespace fraclab
