#ifndef TFWAVE_CONFIG_HPP
#define TFWAVE_CONFIG_HPP

/*
    Flat sectioned key-value config files and the batch experiment runner.

    Grammar (one statement per line):
        [section]
        key = value        # trailing comments allowed
    Unknown sections or keys are validation errors carrying the line number.

    run_command executes one subcommand against a config and returns
    0 (success), 2 (validation failure) or 3 (numeric failure).
*/

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tfwave {

class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::string require_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;

    const std::string& origin() const { return origin_; }

private:
    struct Value {
        std::string text;
        int line = 0;
    };
    std::string origin_;
    std::map<std::string, std::map<std::string, Value>> sections_;
    std::string where(const std::string& section, const std::string& key) const;
};

struct RunOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;  // overrides [perturb] seed
    std::string render_path;            // "analyze": also emit an SVG here
    std::string input_csv;              // "render": coefficient CSV to draw
};

// Subcommands: analyze, frame-bounds, nsgt-check, perturb, wavefront,
// stability, render.
int run_command(const std::string& command, const RunOptions& opts);

} // namespace tfwave

#endif
