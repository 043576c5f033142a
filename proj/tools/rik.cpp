/*
 * Command-line front end.
 *
 * Subcommands: build, count, locate, extract, stats, verify, bench.
 * Exit codes: 0 success, 1 runtime error, 2 usage error, 3 verification
 * failure.
 */
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rik/index_io.hpp"
#include "rik/measures.hpp"

namespace {

using rik::byte_string;
using rik::pos_t;

byte_string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string& s = ss.str();
    return byte_string(s.begin(), s.end());
}

byte_string hex_decode(const std::string& s) {
    if (s.size() % 2 != 0) throw std::runtime_error("odd hex string length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::runtime_error(std::string("bad hex digit '") + c + "'");
    };
    byte_string out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(nib(s[i]) * 16 + nib(s[i + 1])));
    }
    return out;
}

// One pattern per line; a trailing newline on the last line is optional.
std::vector<byte_string> read_patterns(const std::string& path, bool hex) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<byte_string> out;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (hex) {
            out.push_back(hex_decode(line));
        } else {
            out.push_back(byte_string(line.begin(), line.end()));
        }
    }
    return out;
}

struct PatternArgs {
    std::string pattern;
    std::string patterns_file;
    bool hex = false;

    std::vector<byte_string> collect() const {
        std::vector<byte_string> ps;
        if (!patterns_file.empty()) {
            ps = read_patterns(patterns_file, hex);
        }
        if (!pattern.empty()) {
            ps.push_back(hex ? hex_decode(pattern)
                             : byte_string(pattern.begin(), pattern.end()));
        }
        if (ps.empty()) throw std::runtime_error("no pattern given");
        return ps;
    }
};

int cmd_build(const std::string& input, const std::string& output,
              const rik::IndexBuildOptions& opts) {
    byte_string text = read_file(input);
    rik::Index ix = rik::Index::build(text, opts);
    rik::save_index(ix, output);
    std::ifstream f(output, std::ios::binary | std::ios::ate);
    std::cerr << "n=" << ix.n() << " sigma=" << ix.sigma()
              << " runs=" << ix.runs_count() << " bytes=" << f.tellg()
              << "\n";
    return 0;
}

int cmd_count(const std::string& index_path, const PatternArgs& pa) {
    rik::Index ix = rik::load_index(index_path);
    for (const auto& p : pa.collect()) {
        std::cout << ix.count(p) << "\n";
    }
    return 0;
}

int cmd_locate(const std::string& index_path, const PatternArgs& pa,
               pos_t limit) {
    rik::Index ix = rik::load_index(index_path);
    for (const auto& p : pa.collect()) {
        std::vector<pos_t> occ = ix.locate(p);
        pos_t shown = limit > 0
                          ? std::min<pos_t>(limit, static_cast<pos_t>(occ.size()))
                          : static_cast<pos_t>(occ.size());
        for (pos_t k = 0; k < shown; ++k) {
            if (k) std::cout << ' ';
            std::cout << occ[static_cast<std::size_t>(k)];
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_extract(const std::string& index_path, pos_t start, pos_t len) {
    rik::Index ix = rik::load_index(index_path);
    byte_string s = ix.extract(start, len);
    std::fwrite(s.data(), 1, s.size(), stdout);
    return 0;
}

int cmd_stats(const std::string& input, bool from_index, bool as_json) {
    byte_string text;
    if (from_index) {
        rik::Index ix = rik::load_index(input);
        if (!ix.has_text()) {
            throw std::runtime_error(
                "index was built without --store-text; stats needs the text");
        }
        text = ix.text_bytes();
    } else {
        text = read_file(input);
    }
    rik::TextBundle b = rik::TextBundle::build(text);
    rik::TextStats st = rik::compute_stats(b);
    // Scheme size counts the directives actually emitted: nonempty copies
    // plus one explicit character per phrase.
    if (as_json) {
        nlohmann::json j = {{"n", st.n},
                            {"sigma", st.sigma},
                            {"r", st.bwt_runs},
                            {"scheme_size", st.macro_directives},
                            {"z", st.z},
                            {"z_no", st.z_no_overlap}};
        std::cout << j.dump(2) << "\n";
    } else {
        auto row = [](const char* key, pos_t value) {
            std::cout << std::left << std::setw(11) << key << " = " << value
                      << "\n";
        };
        row("n", st.n);
        row("sigma", st.sigma);
        row("r", st.bwt_runs);
        row("scheme_size", st.macro_directives);
        row("z", st.z);
        row("z_no", st.z_no_overlap);
    }
    return 0;
}

int cmd_verify(const std::string& index_path, const std::string& text_path) {
    rik::Index ix = rik::load_index(index_path);
    byte_string text;
    if (!text_path.empty()) {
        text = read_file(text_path);
    } else if (ix.has_text()) {
        text = ix.text_bytes();
        // The stored text already carries the terminator byte.
        if (!text.empty() && text.back() == rik::terminator_byte) {
            text.pop_back();
        }
    } else {
        throw std::runtime_error("verify needs --text or an index with text");
    }
    rik::TextBundle b = rik::TextBundle::build(text);

    int failures = 0;
    auto report = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };

    report(b.n() == ix.n() && b.sigma() == ix.sigma() &&
               b.runs_count() == ix.runs_count(),
           "header matches the text (n, sigma, runs)");

    {
        bool ok = true;
        pos_t stride = std::max<pos_t>(1, b.n() / 4096);
        for (pos_t p = 1; p <= b.n() && ok; p += stride) {
            ok = ix.rlfm().access_bwt(p) == b.bwt_at(p);
        }
        report(ok, "BWT access agrees with the rebuilt text");
    }

    // Deterministic pattern sample: substrings of the text plus mutated
    // copies that may not occur.
    std::mt19937_64 rng(42);
    std::vector<byte_string> pats;
    for (pos_t len : {1, 2, 3, 5, 8, 13, 21, 34}) {
        if (len > b.n()) break;
        for (int k = 0; k < 8; ++k) {
            pos_t i = 1 + static_cast<pos_t>(rng() % static_cast<std::uint64_t>(
                                                 b.n() - len + 1));
            byte_string p;
            for (pos_t t = 0; t < len; ++t) {
                p.push_back(b.alphabet().unmap(b.text_at(i + t)));
            }
            pats.push_back(p);
            byte_string q = p;
            q[rng() % q.size()] =
                b.alphabet().unmap(static_cast<rik::sym_t>(
                    2 + rng() % (b.sigma() - 1)));
            pats.push_back(q);
        }
    }
    {
        bool ok = true;
        for (const auto& p : pats) {
            if (ix.count(p) != rik::oracle_count(b, p)) {
                ok = false;
                break;
            }
        }
        report(ok, "count agrees with a direct scan");
    }
    {
        bool ok = true;
        for (const auto& p : pats) {
            if (ix.locate(p) != rik::oracle_locate(b, p)) {
                ok = false;
                break;
            }
        }
        report(ok, "locate agrees with a direct scan");
    }
    {
        bool ok = true;
        for (pos_t p = 1; p <= b.n() && ok; ++p) {
            rik::SaNeighbors nb = ix.phrase_table().neighbors(b.sa_at(p));
            pos_t left = p > 1 ? b.sa_at(p - 1) : rik::no_neighbor;
            pos_t right = p < b.n() ? b.sa_at(p + 1) : rik::no_neighbor;
            ok = nb.left == left && nb.right == right;
        }
        report(ok, "suffix-array neighbor table agrees with the text");
    }
    if (ix.has_extract()) {
        bool ok = ix.extract_index().audit(b);
        for (int k = 0; k < 64 && ok; ++k) {
            pos_t i = 1 + static_cast<pos_t>(
                              rng() % static_cast<std::uint64_t>(b.n()));
            pos_t len = std::min<pos_t>(b.n() - i + 1,
                                        static_cast<pos_t>(rng() % 64));
            byte_string got = ix.extract(i, len);
            byte_string want;
            for (pos_t t = 0; t < len; ++t) {
                want.push_back(b.alphabet().unmap(b.text_at(i + t)));
            }
            ok = got == want;
        }
        report(ok, "extraction matches the text");
    }
    if (ix.has_fingerprint()) {
        const auto& fp = ix.fingerprint_index();
        bool ok = fp.audit_structure(b);
        for (int k = 0; k < 64 && ok; ++k) {
            pos_t i = 1 + static_cast<pos_t>(
                              rng() % static_cast<std::uint64_t>(b.n()));
            pos_t j = i + static_cast<pos_t>(
                              rng() % static_cast<std::uint64_t>(b.n() - i + 1));
            std::span<const rik::sym_t> w(b.text().data() + (i - 1),
                                          static_cast<std::size_t>(j - i + 1));
            ok = fp.kappa_range(i, j) ==
                 rik::kappa_direct(w, fp.base(), fp.modulus());
        }
        report(ok, "fingerprints match direct evaluation");
    }
    {
        rik::MacroScheme ms = rik::MacroScheme::from_runs(b);
        bool ok = ms.validate() && ms.reconstruct() == b.text() &&
                  ms.directive_count() == 2 * b.runs_count();
        report(ok, "macro scheme validates and reproduces the text");
    }

    if (failures > 0) {
        std::cout << failures << " check(s) failed\n";
        return 3;
    }
    std::cout << "all checks passed\n";
    return 0;
}

int cmd_bench(const std::string& index_path, const PatternArgs& pa) {
    rik::Index ix = rik::load_index(index_path);
    std::vector<byte_string> pats = pa.collect();
    {
        std::ostringstream ss;
        rik::save_index(ix, ss);
        std::cerr << "index_bytes=" << ss.str().size() << " n=" << ix.n()
                  << " runs=" << ix.runs_count()
                  << " sampler_cells=" << ix.sampler().sample_count()
                  << " patterns=" << pats.size() << "\n";
    }
    using clock = std::chrono::steady_clock;
    std::cout << "pattern_id,m,occ,count_ns,locate_ns_per_occ\n";
    for (std::size_t id = 0; id < pats.size(); ++id) {
        const auto& p = pats[id];
        auto t0 = clock::now();
        pos_t occ = ix.count(p);
        auto t1 = clock::now();
        auto hits = ix.locate(p);
        auto t2 = clock::now();
        if (static_cast<pos_t>(hits.size()) != occ) {
            throw std::runtime_error("count/locate disagree while timing");
        }
        auto count_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                .count();
        auto locate_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(t2 - t1)
                .count();
        double per_occ = occ > 0 ? static_cast<double>(locate_ns) /
                                       static_cast<double>(occ)
                                 : 0.0;
        std::cout << id << ',' << p.size() << ',' << occ << ',' << count_ns
                  << ',' << per_occ << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"run-length BWT self-index"};
    app.require_subcommand(1);

    std::string input, output, index_path, text_path;
    rik::IndexBuildOptions bopts;
    bool no_extract = false, no_fingerprint = false;
    PatternArgs pa;
    pos_t limit = 0, start = 0, len = 0;
    bool from_index = false, as_json = false;

    auto* c_build = app.add_subcommand("build", "build an index from a file");
    c_build->add_option("input", input, "input text file")->required();
    c_build->add_option("-o,--output", output, "index file to write")
        ->required();
    c_build->add_option("--sample-s", bopts.sampler_radius,
                        "SA/LCP block radius s");
    c_build->add_option("--alpha", bopts.alpha, "extraction batch size");
    c_build->add_option("--fp-seed", bopts.fp_seed, "fingerprint base seed");
    c_build->add_option("--fp-modulus", bopts.fp_modulus,
                        "fingerprint modulus (prime)");
    c_build->add_flag("--store-text", bopts.store_text,
                      "embed the text in the index");
    c_build->add_flag("--no-extract", no_extract,
                      "skip the extraction structure");
    c_build->add_flag("--no-fingerprint", no_fingerprint,
                      "skip the fingerprint structure");

    auto add_pattern_opts = [&pa](CLI::App* c) {
        c->add_option("pattern", pa.pattern, "pattern (literal bytes)");
        c->add_option("--patterns-file", pa.patterns_file,
                      "file with one pattern per line");
        c->add_flag("--hex", pa.hex, "patterns are hex encoded");
    };

    auto* c_count = app.add_subcommand("count", "count pattern occurrences");
    c_count->add_option("index", index_path, "index file")->required();
    add_pattern_opts(c_count);

    auto* c_locate = app.add_subcommand("locate", "list occurrence positions");
    c_locate->add_option("index", index_path, "index file")->required();
    add_pattern_opts(c_locate);
    c_locate->add_option("--limit", limit, "print at most this many");

    auto* c_extract = app.add_subcommand("extract", "print a substring");
    c_extract->add_option("index", index_path, "index file")->required();
    c_extract->add_option("start", start, "1-based start position")
        ->required();
    c_extract->add_option("len", len, "number of characters")->required();

    auto* c_stats = app.add_subcommand("stats", "repetitiveness measures");
    c_stats->add_option("input", input, "text file (or index, see --index)")
        ->required();
    c_stats->add_flag("--index", from_index,
                      "input is an index with stored text");
    c_stats->add_flag("--json", as_json, "JSON output");

    auto* c_verify = app.add_subcommand("verify",
                                        "check an index against its text");
    c_verify->add_option("index", index_path, "index file")->required();
    c_verify->add_option("--text", text_path, "original text file");

    auto* c_bench = app.add_subcommand("bench", "time count/locate");
    c_bench->add_option("index", index_path, "index file")->required();
    add_pattern_opts(c_bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_build->parsed()) {
            bopts.with_extract = !no_extract;
            bopts.with_fingerprint = !no_fingerprint;
            return cmd_build(input, output, bopts);
        }
        if (c_count->parsed()) return cmd_count(index_path, pa);
        if (c_locate->parsed()) return cmd_locate(index_path, pa, limit);
        if (c_extract->parsed()) return cmd_extract(index_path, start, len);
        if (c_stats->parsed()) return cmd_stats(input, from_index, as_json);
        if (c_verify->parsed()) return cmd_verify(index_path, text_path);
        if (c_bench->parsed()) return cmd_bench(index_path, pa);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
