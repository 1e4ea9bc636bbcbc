#include "routepe/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "routepe/errors.hpp"

namespace routepe {

using nlohmann::json;

namespace {

json customer_array(const std::vector<int>& per_node) {
    json a = json::array();
    for (std::size_t i = 1; i < per_node.size(); ++i) a.push_back(per_node[i]);
    return a;
}

json customer_array(const std::vector<double>& per_node) {
    json a = json::array();
    for (std::size_t i = 1; i < per_node.size(); ++i) a.push_back(per_node[i]);
    return a;
}

void expect_schema(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("schema")) {
        throw SchemaError(std::string(what) + ": missing \"schema\" key");
    }
    if (j.at("schema").get<int>() != 1) {
        throw SchemaError(std::string(what) + ": unsupported schema version");
    }
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
    json j;
    j["schema"] = 1;
    j["variant"] = to_string(inst.variant);
    j["capacity"] = inst.capacity;
    json coords = json::array();
    for (const Point& p : inst.coords) coords.push_back(json::array({p.x, p.y}));
    j["coords"] = coords;
    if (!inst.demands.empty()) j["demands"] = customer_array(inst.demands);
    if (!inst.windows.empty()) {
        json w = json::array();
        for (std::size_t i = 1; i < inst.windows.size(); ++i) {
            w.push_back(json::array({inst.windows[i].open, inst.windows[i].close}));
        }
        j["windows"] = w;
    }
    if (!inst.service.empty()) j["service"] = customer_array(inst.service);
    if (!inst.prizes.empty()) j["prizes"] = customer_array(inst.prizes);
    if (!inst.pd_pairs.empty()) {
        json pd = json::array();
        for (const auto& [p, d] : inst.pd_pairs) pd.push_back(json::array({p, d}));
        j["pd_pairs"] = pd;
    }
    if (!inst.meta_json.empty()) j["meta"] = json::parse(inst.meta_json);
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("instance: not valid JSON: ") + e.what());
    }
    try {
        expect_schema(j, "instance");
        Instance inst;
        inst.variant = variant_from_string(j.at("variant").get<std::string>());
        inst.capacity = j.at("capacity").get<int>();
        for (const auto& c : j.at("coords")) {
            inst.coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        }
        if (inst.coords.empty()) throw SchemaError("instance: empty coords");
        const std::size_t n = inst.coords.size();
        auto read_customers = [&](const char* key, auto& dest, auto zero) {
            if (!j.contains(key)) return;
            dest.assign(n, zero);
            const auto& arr = j.at(key);
            if (arr.size() != n - 1) throw SchemaError(std::string("instance: bad length for ") + key);
            for (std::size_t i = 0; i < arr.size(); ++i) dest[i + 1] = arr[i];
        };
        read_customers("demands", inst.demands, 0);
        read_customers("service", inst.service, 0.0);
        read_customers("prizes", inst.prizes, 0.0);
        if (j.contains("windows")) {
            inst.windows.assign(n, TimeWindow{});
            const auto& arr = j.at("windows");
            if (arr.size() != n - 1) throw SchemaError("instance: bad length for windows");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                inst.windows[i + 1] = {arr[i].at(0).get<double>(), arr[i].at(1).get<double>()};
            }
        }
        if (j.contains("pd_pairs")) {
            for (const auto& pr : j.at("pd_pairs")) {
                inst.pd_pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
            }
        }
        if (j.contains("meta")) inst.meta_json = j.at("meta").dump();
        return inst;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("instance: schema mismatch: ") + e.what());
    } catch (const ConfigError& e) {
        throw SchemaError(std::string("instance: ") + e.what());
    }
}

std::string solution_to_json(const SolutionRecord& rec) {
    json j;
    j["schema"] = 1;
    j["objective"] = rec.cost.objective;
    j["travel"] = rec.cost.travel;
    j["prize_collected"] = rec.cost.prize_collected;
    json routes = json::array();
    for (const Route& r : rec.solution.routes) routes.push_back(r.nodes);
    j["routes"] = routes;
    j["reward_trace_len"] = rec.reward_trace_len;
    j["instance"] = json::parse(instance_to_json(rec.instance));
    if (!rec.meta_json.empty()) j["meta"] = json::parse(rec.meta_json);
    return j.dump(2) + "\n";
}

SolutionRecord solution_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("solution: not valid JSON: ") + e.what());
    }
    try {
        expect_schema(j, "solution");
        SolutionRecord rec;
        rec.instance = instance_from_json(j.at("instance").dump());
        for (const auto& r : j.at("routes")) {
            Route route;
            for (const auto& v : r) route.nodes.push_back(v.get<int>());
            rec.solution.routes.push_back(std::move(route));
        }
        rec.cost.objective = j.at("objective").get<double>();
        rec.cost.travel = j.at("travel").get<double>();
        rec.cost.prize_collected = j.at("prize_collected").get<double>();
        rec.reward_trace_len = j.at("reward_trace_len").get<std::uint64_t>();
        if (j.contains("meta")) rec.meta_json = j.at("meta").dump();
        return rec;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("solution: schema mismatch: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, const std::string& suffix) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace routepe
