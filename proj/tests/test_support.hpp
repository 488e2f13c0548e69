#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chronopress/cli.hpp"
#include "chronopress/corpus.hpp"

namespace chronopress::testing {

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() / ("chronopress-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Builds an ALTO document from (block id, hpos, vpos, width, [(content, font)]) specs.
struct AltoWord {
    std::string content;
    double font = 10.0;
};

struct AltoBlockSpec {
    std::string id;
    long hpos = 0;
    long vpos = 0;
    long width = 700;
    std::vector<AltoWord> words;
};

inline std::string make_alto(const std::vector<AltoBlockSpec>& blocks) {
    std::map<double, std::string> styles;
    for (const auto& b : blocks)
        for (const auto& w : b.words) styles.emplace(w.font, "");
    std::string x = "<alto><Styles>";
    int n = 0;
    for (auto& [font, id] : styles) {
        id = "S" + std::to_string(n++);
        std::ostringstream f;
        f << font;
        x += "<TextStyle ID=\"" + id + "\" FONTSIZE=\"" + f.str() + "\"/>";
    }
    x += "</Styles><Layout><Page><PrintSpace>";
    for (const auto& b : blocks) {
        x += "<TextBlock ID=\"" + b.id + "\" HPOS=\"" + std::to_string(b.hpos) + "\" VPOS=\"" + std::to_string(b.vpos) +
             "\" WIDTH=\"" + std::to_string(b.width) + "\" HEIGHT=\"100\"><TextLine>";
        for (const auto& w : b.words)
            x += "<String CONTENT=\"" + w.content + "\" STYLEREFS=\"" + styles[w.font] + "\"/>";
        x += "</TextLine></TextBlock>";
    }
    x += "</PrintSpace></Page></Layout></alto>";
    return x;
}

inline PageId test_page_id(int page = 1) { return PageId{"ledger", Date{1914, 11, 3}, page}; }

}  // namespace chronopress::testing
