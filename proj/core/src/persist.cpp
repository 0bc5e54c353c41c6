#include "mdplab/persist.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mdplab/errors.hpp"
#include "mdplab/mdp_io.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace mdplab {

namespace {

constexpr char kBitsetMagic[8] = {'M', 'D', 'P', 'L', 'B', 'S', 'E', 'T'};

void write_u64(std::ofstream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    char buf[8];
    in.read(buf, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(buf[i])) << (8 * i);
    return v;
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& flags) {
    std::vector<std::uint8_t> bytes((flags.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) bytes[i / 8] |= std::uint8_t(1u << (i % 8));
    return bytes;
}

std::string pair_slug(std::size_t index, const std::string& label) {
    std::string slug = label;
    for (char& c : slug)
        if (c == ' ' || c == ':' || c == '=' || c == '/') c = '_';
    return std::to_string(index) + "_" + slug;
}

}  // namespace

std::string curve_csv(const RewardCurve& curve, int n_agents) {
    std::ostringstream out;
    out << "episode,mean_return,std_return,n_agents\n";
    for (const CurvePoint& p : curve)
        out << p.episode << ',' << format_double(p.mean_return) << ','
            << format_double(p.std_return) << ',' << n_agents << '\n';
    return out.str();
}

RewardCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open curve file: " + path);
    RewardCurve curve;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CurvePoint p;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        p.episode = std::stoi(field);
        std::getline(row, field, ',');
        p.mean_return = std::stod(field);
        std::getline(row, field, ',');
        p.std_return = std::stod(field);
        curve.push_back(p);
    }
    return curve;
}

std::vector<double> read_finals_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open finals file: " + path);
    std::vector<double> finals;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto last_comma = line.rfind(',');
        finals.push_back(std::stod(line.substr(last_comma + 1)));
    }
    return finals;
}

void write_bitset(const std::string& path, const std::vector<std::uint8_t>& flags) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(kBitsetMagic, 8);
    write_u64(out, flags.size());
    const auto bytes = pack_bits(flags);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::uint8_t> read_bitset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open bitset file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != std::string(kBitsetMagic, 8))
        throw IoError("not a bitset file: " + path);
    const std::uint64_t n = read_u64(in);
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw IoError("truncated bitset file: " + path);
    std::vector<std::uint8_t> flags(n, 0);
    for (std::uint64_t i = 0; i < n; ++i) flags[i] = (bytes[i / 8] >> (i % 8)) & 1;
    return flags;
}

void write_run(const std::string& dir, const ExperimentSpec& spec, const RunResult& result,
               const std::string& config_echo) {
    fs::create_directories(dir);
    const fs::path base(dir);

    write_text_file((base / "spec.echo").string(),
                    "# " + spec.name + "\n# fingerprint " + std::to_string(result.spec_fingerprint) +
                        "\n# train " + spec.train_env.canonical_string() + "\n# test " +
                        spec.test_env.canonical_string() + "\n\n" + config_echo);
    write_text_file((base / "curve.csv").string(), curve_csv(result.curve, spec.protocol.n_agents));

    std::ostringstream finals;
    finals << "agent_index,seed,final_return\n";
    for (std::size_t i = 0; i < result.per_agent_final.size(); ++i)
        finals << i << ',' << result.per_agent_seed[i] << ','
               << format_double(result.per_agent_final[i]) << '\n';
    write_text_file((base / "per_agent_final.csv").string(), finals.str());

    write_bitset((base / "visited.bin").string(), result.visited_union);
    write_bitset((base / "legal.bin").string(), result.legal_pairs);
    {
        std::ofstream out(base / "visited_agents.bin", std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + (base / "visited_agents.bin").string());
        out.write(kBitsetMagic, 8);
        write_u64(out, result.visited_per_agent.size());
        write_u64(out, result.visited_union.size());
        for (const auto& flags : result.visited_per_agent) {
            const auto bytes = pack_bits(flags);
            out.write(reinterpret_cast<const char*>(bytes.data()),
                      static_cast<std::streamsize>(bytes.size()));
        }
    }

    ordered_json meta;
    meta["name"] = spec.name;
    meta["fingerprint"] = result.spec_fingerprint;
    meta["num_states"] = result.num_states;
    meta["num_actions"] = result.num_actions;
    meta["n_agents"] = spec.protocol.n_agents;
    meta["r_max"] = result.r_max;
    write_text_file((base / "run_meta.json").string(), meta.dump(2) + "\n");
}

RunMeta read_run_meta(const std::string& path) {
    const ordered_json meta = ordered_json::parse(read_text_file(path));
    RunMeta out;
    out.name = meta.at("name").get<std::string>();
    out.spec_fingerprint = meta.at("fingerprint").get<std::uint64_t>();
    out.num_states = meta.at("num_states").get<StateId>();
    out.num_actions = meta.at("num_actions").get<int>();
    out.r_max = meta.at("r_max").get<double>();
    return out;
}

void write_suite(const std::string& out_dir, const std::vector<SuitePair>& manifest,
                 const SuiteResult& result, const std::string& config_echo) {
    fs::create_directories(out_dir);
    const fs::path base(out_dir);
    ordered_json index;
    index["pairs"] = ordered_json::array();

    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const SuitePair& pair = manifest[i];
        const PairOutcome& outcome = result.pairs[i];
        const std::string slug = pair_slug(i, pair.target_label);
        ordered_json entry;
        entry["target"] = pair.target_label;
        entry["dir"] = slug;
        entry["ok"] = outcome.ok;
        if (outcome.ok) {
            write_run((base / slug / "L").string(), pair.learnability, outcome.learnability,
                      config_echo);
            write_run((base / slug / "G").string(), pair.generalization, outcome.generalization,
                      config_echo);
        } else {
            entry["error"] = outcome.error;
        }
        index["pairs"].push_back(entry);
    }
    write_text_file((base / "manifest.json").string(), index.dump(2) + "\n");
}

std::vector<PairInput> read_suite_inputs(const std::string& suite_dir) {
    const fs::path base(suite_dir);
    const ordered_json index = ordered_json::parse(read_text_file((base / "manifest.json").string()));
    std::vector<PairInput> inputs;
    for (const auto& entry : index.at("pairs")) {
        if (!entry.at("ok").get<bool>()) continue;
        const fs::path pair_dir = base / entry.at("dir").get<std::string>();
        PairInput input;
        input.label = entry.at("target").get<std::string>();
        input.curve_l = read_curve_csv((pair_dir / "L" / "curve.csv").string());
        input.curve_g = read_curve_csv((pair_dir / "G" / "curve.csv").string());
        input.finals_l = read_finals_csv((pair_dir / "L" / "per_agent_final.csv").string());
        input.finals_g = read_finals_csv((pair_dir / "G" / "per_agent_final.csv").string());
        input.visited_l = read_bitset((pair_dir / "L" / "visited.bin").string());
        input.visited_g = read_bitset((pair_dir / "G" / "visited.bin").string());
        input.universe = read_bitset((pair_dir / "L" / "legal.bin").string());
        const RunMeta meta = read_run_meta((pair_dir / "L" / "run_meta.json").string());
        input.num_states = meta.num_states;
        input.num_actions = meta.num_actions;
        input.r_max = meta.r_max;
        inputs.push_back(std::move(input));
    }
    return inputs;
}

std::string plot_data(const RewardCurve& curve) {
    std::ostringstream out;
    out << "# episode mean_return std_return\n";
    for (const CurvePoint& p : curve)
        out << p.episode << ' ' << format_double(p.mean_return) << ' '
            << format_double(p.std_return) << '\n';
    return out.str();
}

void write_suite_report_files(const std::string& out_dir, const SuiteReport& report,
                              const std::vector<PairInput>& pairs) {
    fs::create_directories(out_dir);
    const fs::path base(out_dir);
    write_text_file((base / "report.csv").string(), report.to_csv());
    write_text_file((base / "summary.txt").string(), report.summary_text());
    write_text_file((base / "exploration_grid_colors.csv").string(), exploration_grid_colors_csv());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const PairInput& pair = pairs[i];
        const std::string slug = pair_slug(i, pair.label);
        const ExplorationGrid grid =
            exploration_grid(pair.visited_l, pair.visited_g, pair.num_states, pair.num_actions);
        write_text_file((base / (slug + "_exploration_grid.csv")).string(),
                        exploration_grid_csv(grid));
        write_text_file((base / (slug + "_plot_L.dat")).string(), plot_data(pair.curve_l));
        write_text_file((base / (slug + "_plot_G.dat")).string(), plot_data(pair.curve_g));
    }
}

}  // namespace mdplab
