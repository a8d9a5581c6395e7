#ifndef BALLKERNEL_CLI_CONFIG_HPP
#define BALLKERNEL_CLI_CONFIG_HPP

#include "ballkernel/campaigns.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

// Flat "key = value" configuration text. Lines may carry a trailing "# comment"; blank lines and
// comment-only lines are skipped. Keys use the command-line spelling without the dashes
// ("theta-count"); underscores are accepted in place of hyphens.

namespace ballkernel::cli
{

inline std::string trim(std::string s)
{
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline std::string canonical_key(std::string key)
{
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

inline double parse_double(const std::string& text, const std::string& key)
{
    const std::string s = trim(text);
    double            v = 0.;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError{key + ": '" + text + "' is not a finite number"};
    return v;
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& key)
{
    const std::string s = trim(text);
    std::uint64_t     v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size())
        return v;
    // Accept integral values in exponent form such as 2e5.
    const double d = parse_double(s, key);
    if (d < 0. || d != std::floor(d) || d > 1.8e19)
        throw UsageError{key + ": '" + text + "' is not a non-negative integer"};
    return static_cast< std::uint64_t >(d);
}

inline int parse_int(const std::string& text, const std::string& key)
{
    const std::uint64_t v = parse_u64(text, key);
    if (v > 1000000000u)
        throw UsageError{key + ": '" + text + "' is too large"};
    return static_cast< int >(v);
}

/// Comma-separated list of numbers.
inline std::vector< double > parse_list(const std::string& text, const std::string& key)
{
    std::vector< double > out;
    std::size_t           start = 0;
    for (;;)
    {
        const std::size_t comma = text.find(',', start);
        out.push_back(parse_double(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start), key));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_bool(const std::string& text, const std::string& key)
{
    std::string s = trim(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast< char >(std::tolower(ch)); });
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    throw UsageError{key + ": '" + text + "' is not a boolean"};
}

/// Applies one setting; unknown keys and malformed values raise UsageError.
inline void apply_setting(CampaignConfig& c, const std::string& raw_key, const std::string& value)
{
    const std::string key = canonical_key(trim(raw_key));
    if (key == "dim")
        c.dim = parse_int(value, key);
    else if (key == "t")
        c.t = parse_list(value, key);
    else if (key == "x")
        c.x = parse_list(value, key);
    else if (key == "r")
        c.r = parse_list(value, key);
    else if (key == "theta")
        c.theta = parse_double(value, key);
    else if (key == "theta-count")
        c.theta_count = parse_int(value, key);
    else if (key == "mc-angles")
        c.mc_angles = parse_int(value, key);
    else if (key == "dt")
        c.dt = parse_double(value, key);
    else if (key == "seed")
        c.seed = parse_u64(value, key);
    else if (key == "paths")
        c.paths = parse_u64(value, key);
    else if (key == "epsilon")
        c.epsilon = parse_double(value, key);
    else if (key == "mc")
        c.mc = parse_bool(value, key);
    else if (key == "budget")
        c.budget = parse_double(value, key);
    else if (key == "out")
        c.out = trim(value);
    else
        throw UsageError{"unknown configuration key '" + raw_key + "'"};
}

/// Key-value pairs of a configuration text, in file order.
inline std::vector< std::pair< std::string, std::string > > parse_config_text(const std::string& text)
{
    std::vector< std::pair< std::string, std::string > > out;
    std::size_t                                          line_no = 0, pos = 0;
    while (pos <= text.size())
    {
        const std::size_t nl   = text.find('\n', pos);
        std::string       line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos                    = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
            throw UsageError{"config line " + std::to_string(line_no) + ": expected 'key = value'"};
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

inline void apply_config_file(CampaignConfig& c, const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw UsageError{"cannot read config file '" + path + "'"};
    const std::string text{std::istreambuf_iterator< char >{in}, std::istreambuf_iterator< char >{}};
    for (const auto& [k, v] : parse_config_text(text))
        apply_setting(c, k, v);
}

} // namespace ballkernel::cli

#endif // BALLKERNEL_CLI_CONFIG_HPP
