#ifndef BALLKERNEL_CLI_REPORT_HPP
#define BALLKERNEL_CLI_REPORT_HPP

#include "ballkernel/campaigns.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ballkernel::cli
{

inline nlohmann::json config_json(const CampaignConfig& c)
{
    return {
        {"command", c.command}, {"dim", c.dim},         {"t", c.t},
        {"x", c.x},             {"r", c.r},             {"theta", c.theta},
        {"theta_count", c.theta_count}, {"mc_angles", c.mc_angles}, {"dt", c.dt},
        {"seed", c.seed},       {"paths", c.paths},     {"epsilon", c.epsilon},
        {"mc", c.mc},           {"budget", c.budget},   {"out", c.out},
    };
}

/// The report document; "pass" is true exactly when every check passes.
inline nlohmann::json report_json(const CampaignResult& res)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : res.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"relation", c.relation},
                          {"threshold", c.threshold},
                          {"pass", c.pass}});
    nlohmann::json notes = nlohmann::json::object();
    for (const auto& [k, v] : res.notes)
        notes[k] = v;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& t : res.tables)
        files.push_back(t.file);
    return {{"command", res.command},
            {"claim", res.claim},
            {"config", config_json(res.config)},
            {"checks", checks},
            {"notes", notes},
            {"csv_files", files},
            {"pass", res.pass()},
            {"duration_seconds", res.seconds}};
}

inline std::string csv_text(const Table& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& row : t.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + row[i];
        out += '\n';
    }
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f{path, std::ios::binary | std::ios::trunc};
    if (!f)
        throw std::runtime_error{"cannot write " + path.string()};
    f << text;
    if (!f)
        throw std::runtime_error{"write failed for " + path.string()};
}

/// report.json and one CSV per table under dir, created if missing.
inline void write_outputs(const CampaignResult& res, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", report_json(res).dump(2) + "\n");
    for (const auto& t : res.tables)
        write_text(dir / t.file, csv_text(t));
}

} // namespace ballkernel::cli

#endif // BALLKERNEL_CLI_REPORT_HPP
