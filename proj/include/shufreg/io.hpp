#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "shufreg/model.hpp"

namespace shufreg {

/// In-memory form of an instance file:
///
///   {"n": int, "d": int, "x": [[f64; d]; n], "y": [f64; n],
///    "anchor": {"x0": [f64; d], "y0": f64},            (optional)
///    "truth": {"w_bar": [...], "pi_bar": [...],
///              "sigma": f64, "snr": f64 | null,
///              "anchor_index": int},                    (optional)
///    "quantization": {"p": int}}                        (optional)
///
/// snr is null when sigma == 0 (infinite SNR). When an anchor block is
/// present, pi_bar is a permutation of {0..n} with index 0 the anchor.
struct InstanceFile {
    Instance body;
    std::optional<std::pair<Eigen::VectorXd, double>> anchor;
    std::optional<GroundTruth> truth;
    std::optional<QuantizationConfig> quantization;

    bool has_anchor() const noexcept { return anchor.has_value(); }
    /// Requires an anchor block.
    AnchoredInstance anchored() const;
    static InstanceFile from(const Instance& inst);
    static InstanceFile from(const AnchoredInstance& inst);
};

nlohmann::json to_json(const InstanceFile& file);
/// Throws SchemaError on a structurally valid document with wrong shapes.
InstanceFile instance_from_json(const nlohmann::json& doc);

/// Throws ParseError (with line and column) on malformed text.
InstanceFile parse_instance(const std::string& text);
std::string dump_instance(const InstanceFile& file);

InstanceFile read_instance_file(const std::filesystem::path& path);
void write_instance_file(const std::filesystem::path& path, const InstanceFile& file);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const Instance& instance);

}  // namespace shufreg
