#pragma once

#include <map>
#include <string>

namespace hedgelab {

// Flat key = value run configuration; CLI flags overwrite file keys.
// Recognized keys: mode, T, alpha, beta, epsilon, eta, n, k, delta, p,
// k_star, gamma, dagger, scale_half, tsp, gen, convert_maxtsp, cycle,
// strategy, seed, out, thin, checks, sampled. Sweep configs may hold
// comma-separated lists for T, alpha, beta, epsilon, eta, k, seed, strategy.
struct RunConfig {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string get(const std::string& key, const std::string& def = "") const;
    long get_long(const std::string& key, long def) const;
    double get_double(const std::string& key, double def) const;
    bool get_bool(const std::string& key, bool def) const;
    void set(const std::string& key, const std::string& value) { kv[key] = value; }

    // Canonical "k=v k=v ..." form, keys sorted; stable across runs.
    std::string canonical() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hedgelab
