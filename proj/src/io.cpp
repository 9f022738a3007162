#include "shufreg/io.hpp"

#include <fstream>
#include <sstream>

#include "shufreg/errors.hpp"

namespace shufreg {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

const json& field(const json& obj, const char* name, const std::string& where) {
    auto it = obj.find(name);
    if (it == obj.end()) throw SchemaError(where + ": missing field \"" + name + "\"");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(where + ": value is not finite");
    return x;
}

std::size_t count(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw SchemaError(where + ": expected a non-negative integer");
    return v.get<std::size_t>();
}

Eigen::VectorXd vector_from(const json& v, std::size_t expected, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array");
    if (v.size() != expected)
        throw SchemaError(where + ": has " + std::to_string(v.size()) + " entries, expected " + std::to_string(expected));
    Eigen::VectorXd out(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i)
        out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
    return out;
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

AnchoredInstance InstanceFile::anchored() const {
    if (!anchor) throw SchemaError("instance has no anchor block");
    AnchoredInstance out;
    out.x0 = anchor->first;
    out.y0 = anchor->second;
    out.X = body.X;
    out.y = body.y;
    return out;
}

InstanceFile InstanceFile::from(const Instance& inst) {
    InstanceFile f;
    f.body = inst;
    return f;
}

InstanceFile InstanceFile::from(const AnchoredInstance& inst) {
    InstanceFile f;
    f.body = Instance{inst.X, inst.y};
    f.anchor = std::make_pair(inst.x0, inst.y0);
    return f;
}

json to_json(const InstanceFile& file) {
    json doc;
    doc["n"] = file.body.n();
    doc["d"] = file.body.d();
    json x = json::array();
    for (Eigen::Index i = 0; i < file.body.X.rows(); ++i) x.push_back(vector_json(file.body.X.row(i).transpose()));
    doc["x"] = std::move(x);
    doc["y"] = vector_json(file.body.y);
    if (file.anchor) doc["anchor"] = {{"x0", vector_json(file.anchor->first)}, {"y0", file.anchor->second}};
    if (file.truth) {
        const GroundTruth& t = *file.truth;
        json truth;
        truth["w_bar"] = vector_json(t.w_bar);
        truth["pi_bar"] = t.pi_bar.map();
        truth["sigma"] = t.sigma;
        truth["snr"] = std::isfinite(t.snr) ? json(t.snr) : json(nullptr);
        if (t.anchor) truth["anchor_index"] = *t.anchor;
        doc["truth"] = std::move(truth);
    }
    if (file.quantization) doc["quantization"] = {{"p", file.quantization->p}};
    return doc;
}

InstanceFile instance_from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("instance: expected a JSON object");
    const std::size_t n = count(field(doc, "n", "instance"), "n");
    const std::size_t d = count(field(doc, "d", "instance"), "d");
    if (d < 1) throw SchemaError("d: must be at least 1");

    InstanceFile out;
    const json& x = field(doc, "x", "instance");
    if (!x.is_array()) throw SchemaError("x: expected an array of rows");
    if (x.size() != n)
        throw SchemaError("x: has " + std::to_string(x.size()) + " rows, expected n = " + std::to_string(n));
    out.body.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i)
        out.body.X.row(static_cast<Eigen::Index>(i)) = vector_from(x[i], d, "x[" + std::to_string(i) + "]").transpose();
    out.body.y = vector_from(field(doc, "y", "instance"), n, "y");

    if (auto it = doc.find("anchor"); it != doc.end() && !it->is_null()) {
        out.anchor = std::make_pair(vector_from(field(*it, "x0", "anchor"), d, "anchor.x0"),
                                    number(field(*it, "y0", "anchor"), "anchor.y0"));
    }
    if (auto it = doc.find("truth"); it != doc.end() && !it->is_null()) {
        GroundTruth t;
        t.w_bar = vector_from(field(*it, "w_bar", "truth"), d, "truth.w_bar");
        const json& pi = field(*it, "pi_bar", "truth");
        const std::size_t m = out.anchor ? n + 1 : n;
        if (!pi.is_array() || pi.size() != m)
            throw SchemaError("truth.pi_bar: expected an array of " + std::to_string(m) + " indices");
        std::vector<std::size_t> map;
        for (std::size_t i = 0; i < m; ++i) map.push_back(count(pi[i], "truth.pi_bar[" + std::to_string(i) + "]"));
        if (!Permutation::is_bijection(map)) throw SchemaError("truth.pi_bar: not a permutation");
        t.pi_bar = Permutation(std::move(map));
        t.sigma = number(field(*it, "sigma", "truth"), "truth.sigma");
        const json& snr = field(*it, "snr", "truth");
        t.snr = snr.is_null() ? std::numeric_limits<double>::infinity() : number(snr, "truth.snr");
        if (auto a = it->find("anchor_index"); a != it->end()) t.anchor = count(*a, "truth.anchor_index");
        out.truth = std::move(t);
    }
    if (auto it = doc.find("quantization"); it != doc.end() && !it->is_null()) {
        const json& p = field(*it, "p", "quantization");
        if (!p.is_number_integer() || p.get<int>() < 1) throw SchemaError("quantization.p: expected a positive integer");
        out.quantization = QuantizationConfig{p.get<int>()};
    }
    return out;
}

InstanceFile parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(text, e.byte);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    return instance_from_json(doc);
}

std::string dump_instance(const InstanceFile& file) {
    return to_json(file).dump() + "\n";
}

InstanceFile read_instance_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_instance(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

void write_instance_file(const std::filesystem::path& path, const InstanceFile& file) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write " + path.string());
    out << dump_instance(file);
}

Instance read_instance(const std::filesystem::path& path) {
    return read_instance_file(path).body;
}

void write_instance(const std::filesystem::path& path, const Instance& instance) {
    write_instance_file(path, InstanceFile::from(instance));
}

}  // namespace shufreg
