#pragma once

// Small helper for tests that drive the installed CLI binary end to end.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cli_runner {

struct Result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Scratch {
public:
    Scratch() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0;; ++i) {
            auto candidate = base / ("snrlab_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter_++) + "_" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                dir_ = candidate;
                return;
            }
        }
    }
    ~Scratch() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path(const std::string& name) const { return dir_ / name; }

private:
    static inline int counter_ = 0;
    std::filesystem::path dir_;
};

// Runs `binary args...` with stdout/stderr captured through the shell.
inline Result run(const std::string& binary, const std::string& args, const Scratch& scratch) {
    static int invocation = 0;
    const auto out_path = scratch.path("stdout_" + std::to_string(invocation));
    const auto err_path = scratch.path("stderr_" + std::to_string(invocation));
    ++invocation;
    const std::string cmd = "'" + binary + "' " + args + " > '" + out_path.string() + "' 2> '" +
                            err_path.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        lines.push_back(line);
    }
    return lines;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.push_back("");
    }
    return fields;
}

}  // namespace cli_runner
