/*
 * Index assembly over a text bundle and the binary save/load round trip.
 */
#include "rik/index_io.hpp"

#include <cassert>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rik {

namespace {

constexpr char magic[4] = {'R', 'I', 'K', '1'};
constexpr std::uint32_t format_version = 1;

constexpr std::uint64_t flag_text = 1;
constexpr std::uint64_t flag_extract = 2;
constexpr std::uint64_t flag_fingerprint = 4;

enum SectionId : std::uint32_t {
    sec_alphabet = 1,
    sec_rlfm = 2,
    sec_toehold = 3,
    sec_phrase_table = 4,
    sec_sampler = 5,
    sec_extract = 6,
    sec_fingerprint = 7,
    sec_text = 8,
};

// ---- little-endian encoding into / out of byte buffers ----

struct Writer {
    std::string buf;

    void u8(std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) {
        for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

    void pos_vec(const std::vector<pos_t>& v) {
        u64(v.size());
        for (pos_t x : v) i64(x);
    }
    void sym_vec(const sym_string& v) {
        u64(v.size());
        for (sym_t x : v) u16(x);
    }
    void pred_set(const PredSet<pos_t>& s) {
        u64(static_cast<std::uint64_t>(s.universe_hint()));
        u64(s.keys().size());
        for (std::size_t i = 0; i < s.keys().size(); ++i) {
            i64(s.keys()[i]);
            i64(s.payloads()[i]);
        }
    }
};

struct Reader {
    const std::uint8_t* p;
    const std::uint8_t* end;

    explicit Reader(std::string_view s)
        : p(reinterpret_cast<const std::uint8_t*>(s.data())),
          end(p + s.size()) {}

    void need(std::size_t k) const {
        if (static_cast<std::size_t>(end - p) < k) {
            throw index_format_error("index file truncated inside a section");
        }
    }
    std::uint8_t u8() {
        need(1);
        return *p++;
    }
    std::uint16_t u16() {
        std::uint16_t v = 0;
        for (int i = 0; i < 2; ++i) v |= std::uint16_t(u8()) << (8 * i);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(u8()) << (8 * i);
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

    std::vector<pos_t> pos_vec() {
        std::uint64_t k = u64();
        std::vector<pos_t> v(k);
        for (auto& x : v) x = i64();
        return v;
    }
    sym_string sym_vec() {
        std::uint64_t k = u64();
        sym_string v(k);
        for (auto& x : v) x = u16();
        return v;
    }
    PredSet<pos_t> pred_set() {
        pos_t hint = static_cast<pos_t>(u64());
        std::uint64_t k = u64();
        std::vector<pos_t> keys(k);
        std::vector<pos_t> pay(k);
        for (std::uint64_t i = 0; i < k; ++i) {
            keys[i] = i64();
            pay[i] = i64();
        }
        return PredSet<pos_t>(std::move(keys), std::move(pay), hint);
    }
    bool done() const { return p == end; }
};

void put_section(std::ostream& out, std::uint32_t id, const Writer& w) {
    Writer head;
    head.u32(id);
    head.u64(w.buf.size());
    out.write(head.buf.data(), static_cast<std::streamsize>(head.buf.size()));
    out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
}

void write_coord_vec(Writer& w, const std::vector<ExtractIndex::Coord>& v) {
    w.u64(v.size());
    for (const auto& c : v) {
        w.i64(c.sample_idx);
        w.i64(c.offset);
    }
}

std::vector<ExtractIndex::Coord> read_coord_vec(Reader& rd) {
    std::uint64_t k = rd.u64();
    std::vector<ExtractIndex::Coord> v(k);
    for (auto& c : v) {
        c.sample_idx = rd.i64();
        c.offset = rd.i64();
    }
    return v;
}

void write_fp_units(Writer& w, const std::vector<FingerprintIndex::Unit>& v) {
    w.u64(v.size());
    for (const auto& u : v) {
        w.u64(u.kappa);
        w.i64(u.sample_idx);
        w.i64(u.split);
        w.u64(u.kappa_piece1);
        w.u64(u.kappa_piece2);
    }
}

std::vector<FingerprintIndex::Unit> read_fp_units(Reader& rd) {
    std::uint64_t k = rd.u64();
    std::vector<FingerprintIndex::Unit> v(k);
    for (auto& u : v) {
        u.kappa = rd.u64();
        u.sample_idx = rd.i64();
        u.split = rd.i64();
        u.kappa_piece1 = rd.u64();
        u.kappa_piece2 = rd.u64();
    }
    return v;
}

}  // namespace

Index Index::build(std::span<const std::uint8_t> text,
                   IndexBuildOptions opts) {
    return build(TextBundle::build(text), opts);
}

Index Index::build(const TextBundle& b, IndexBuildOptions opts) {
    if (opts.sampler_radius < 1) {
        throw std::invalid_argument("sampler radius must be >= 1");
    }
    if (opts.alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    Index ix;
    ix.n_ = b.n();
    ix.sigma_ = b.sigma();
    ix.alpha_ = opts.alpha;
    ix.alphabet_ = b.alphabet();
    ix.rlfm_ = RlfmIndex::build(b);
    ix.toehold_ = ToeholdSampler::build(b);
    ix.phrases_ = PhraseTable::build(b);
    ix.sampler_ = RunBorderSampler::build(b, opts.sampler_radius);
    if (opts.with_extract) {
        ix.extract_ = ExtractIndex::build(b, ix.rlfm_, ix.toehold_, opts.alpha);
    }
    if (opts.with_fingerprint) {
        FpOptions fo;
        fo.modulus = opts.fp_modulus;
        fo.audit_threshold = opts.fp_audit_threshold;
        fo.audit_max_retries = opts.fp_audit_max_retries;
        ix.fp_ = FingerprintIndex::build(b, ix.rlfm_, ix.toehold_, opts.fp_seed,
                                         fo);
    }
    if (opts.store_text) ix.text_ = b.text();
    return ix;
}

pos_t Index::count(std::span<const std::uint8_t> pattern) const {
    auto syms = alphabet_.map_pattern(pattern);
    if (!syms) return 0;
    return rlfm_.count(*syms);
}

std::vector<pos_t> Index::locate(std::span<const std::uint8_t> pattern) const {
    auto syms = alphabet_.map_pattern(pattern);
    if (!syms) return {};
    return locate_all(rlfm_, toehold_, sampler_, *syms);
}

byte_string Index::extract(pos_t i, pos_t len) const {
    if (!extract_) {
        throw std::logic_error("index built without extraction support");
    }
    return alphabet_.unmap_string(extract_->extract(i, len));
}

std::uint64_t Index::kappa(pos_t i, pos_t j) const {
    if (!fp_) {
        throw std::logic_error("index built without fingerprint support");
    }
    return fp_->kappa_range(i, j);
}

byte_string Index::text_bytes() const {
    if (!text_) throw std::logic_error("index built without stored text");
    return alphabet_.unmap_string(*text_);
}

void save_index(const Index& ix, std::ostream& out) {
    out.write(magic, 4);
    {
        Writer w;
        w.u32(format_version);
        out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
    }
    std::uint64_t flags = 0;
    if (ix.text_) flags |= flag_text;
    if (ix.extract_) flags |= flag_extract;
    if (ix.fp_) flags |= flag_fingerprint;
    {
        Writer w;
        w.i64(ix.n_);
        w.i64(ix.sigma_);
        w.i64(ix.rlfm_.runs_count());
        w.i64(ix.sampler_.radius());
        w.i64(ix.alpha_);
        w.u64(flags);
        w.u64(ix.fp_ ? ix.fp_->seed() : 0);
        w.u64(ix.fp_ ? ix.fp_->modulus() : 0);
        out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
    }

    {
        Writer w;
        w.u64(ix.alphabet_.sigma());
        for (sym_t s = 1; s <= ix.alphabet_.sigma(); ++s) {
            w.u8(ix.alphabet_.unmap(s));
        }
        put_section(out, sec_alphabet, w);
    }
    {
        Writer w;
        w.pos_vec(ix.rlfm_.run_starts());
        w.sym_vec(ix.rlfm_.run_symbols());
        put_section(out, sec_rlfm, w);
    }
    {
        Writer w;
        w.u64(ix.toehold_.sigma());
        for (sym_t c = 1; c <= ix.toehold_.sigma(); ++c) {
            w.pred_set(ix.toehold_.set_for(c));
        }
        put_section(out, sec_toehold, w);
    }
    {
        Writer w;
        const auto& s = ix.phrases_.starts();
        w.u64(static_cast<std::uint64_t>(s.universe_hint()));
        w.u64(s.keys().size());
        for (std::size_t i = 0; i < s.keys().size(); ++i) {
            w.i64(s.keys()[i]);
            w.i64(s.payloads()[i].left);
            w.i64(s.payloads()[i].right);
        }
        put_section(out, sec_phrase_table, w);
    }
    {
        Writer w;
        w.i64(ix.sampler_.radius());
        w.pos_vec(ix.sampler_.sa_samples());
        w.pos_vec(ix.sampler_.lcp_samples());
        w.pred_set(ix.sampler_.pred_forward());
        w.pred_set(ix.sampler_.pred_backward());
        put_section(out, sec_sampler, w);
    }
    if (ix.extract_) {
        auto p = ix.extract_->to_parts();
        Writer w;
        w.i64(p.n);
        w.i64(p.alpha);
        w.i64(p.block_width);
        w.i64(p.level_count);
        w.u8(p.plain ? 1 : 0);
        w.sym_vec(p.plain_text);
        w.pos_vec(p.sample_positions);
        write_coord_vec(w, p.block_coords);
        w.u64(p.level_coords.size());
        for (const auto& v : p.level_coords) write_coord_vec(w, v);
        w.pos_vec(p.window_lo);
        w.u64(p.window_chars.size());
        for (const auto& v : p.window_chars) w.sym_vec(v);
        put_section(out, sec_extract, w);
    }
    if (ix.fp_) {
        auto p = ix.fp_->to_parts();
        Writer w;
        w.i64(p.n);
        w.i64(p.block_width);
        w.i64(p.level_count);
        w.u64(p.q);
        w.u64(p.base);
        w.u64(p.seed);
        w.pos_vec(p.sample_positions);
        w.u64(p.prefix_kappa.size());
        for (auto v : p.prefix_kappa) w.u64(v);
        write_fp_units(w, p.block_units);
        w.u64(p.level_units.size());
        for (const auto& v : p.level_units) write_fp_units(w, v);
        w.u64(p.char_kappa.size());
        for (const auto& a : p.char_kappa) {
            w.u64(a[0]);
            w.u64(a[1]);
        }
        w.pos_vec(p.exp_lengths);
        put_section(out, sec_fingerprint, w);
    }
    if (ix.text_) {
        Writer w;
        w.sym_vec(*ix.text_);
        put_section(out, sec_text, w);
    }
    if (!out) throw index_format_error("write failed");
}

void save_index(const Index& ix, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw index_format_error("cannot open " + path + " for writing");
    save_index(ix, f);
}

Index load_index(std::istream& in) {
    char m[4];
    in.read(m, 4);
    if (!in || std::memcmp(m, magic, 4) != 0) {
        throw index_format_error("not an index file (bad magic)");
    }
    auto read_block = [&](std::size_t k) {
        std::string s(k, '\0');
        in.read(s.data(), static_cast<std::streamsize>(k));
        if (!in) throw index_format_error("index file truncated");
        return s;
    };
    std::string vbuf = read_block(4);
    Reader vr(vbuf);
    std::uint32_t version = vr.u32();
    if (version != format_version) {
        throw index_format_error("unsupported index format version " +
                                 std::to_string(version));
    }
    std::string hbuf = read_block(8 * 8);
    Reader hr(hbuf);
    Index ix;
    ix.n_ = hr.i64();
    ix.sigma_ = hr.i64();
    pos_t runs = hr.i64();
    pos_t radius = hr.i64();
    ix.alpha_ = hr.i64();
    std::uint64_t flags = hr.u64();
    hr.u64();  // fingerprint seed, informational here
    hr.u64();  // fingerprint modulus, informational here

    bool have_alphabet = false, have_rlfm = false, have_toehold = false;
    bool have_phrases = false, have_sampler = false;
    std::vector<pos_t> rlfm_starts;
    sym_string rlfm_symbols;

    for (;;) {
        char idb[4];
        in.read(idb, 4);
        if (in.gcount() == 0 && in.eof()) break;
        if (in.gcount() != 4) throw index_format_error("truncated section id");
        std::string lenb = read_block(8);
        Reader lr(lenb);
        std::uint64_t len = lr.u64();
        std::string payload = read_block(len);
        Reader rd(payload);
        std::uint32_t id = 0;
        for (int i = 0; i < 4; ++i) {
            id |= std::uint32_t(static_cast<std::uint8_t>(idb[i])) << (8 * i);
        }
        switch (id) {
            case sec_alphabet: {
                std::uint64_t k = rd.u64();
                std::vector<std::uint8_t> bytes(k);
                for (auto& x : bytes) x = rd.u8();
                ix.alphabet_ = AlphabetMap::from_bytes(std::move(bytes));
                have_alphabet = true;
                break;
            }
            case sec_rlfm: {
                rlfm_starts = rd.pos_vec();
                rlfm_symbols = rd.sym_vec();
                have_rlfm = true;
                break;
            }
            case sec_toehold: {
                std::uint64_t k = rd.u64();
                std::vector<PredSet<pos_t>> sets;
                sets.reserve(k);
                for (std::uint64_t i = 0; i < k; ++i) {
                    sets.push_back(rd.pred_set());
                }
                ix.toehold_ = ToeholdSampler::from_sets(std::move(sets));
                have_toehold = true;
                break;
            }
            case sec_phrase_table: {
                pos_t hint = static_cast<pos_t>(rd.u64());
                std::uint64_t k = rd.u64();
                std::vector<pos_t> keys(k);
                std::vector<SaNeighbors> pay(k);
                for (std::uint64_t i = 0; i < k; ++i) {
                    keys[i] = rd.i64();
                    pay[i].left = rd.i64();
                    pay[i].right = rd.i64();
                }
                ix.phrases_ = PhraseTable::from_set(PredSet<SaNeighbors>(
                    std::move(keys), std::move(pay), hint));
                have_phrases = true;
                break;
            }
            case sec_sampler: {
                pos_t s = rd.i64();
                auto sa = rd.pos_vec();
                auto lcp = rd.pos_vec();
                auto fwd = rd.pred_set();
                auto bwd = rd.pred_set();
                ix.sampler_ = RunBorderSampler::from_parts(
                    s, std::move(sa), std::move(lcp), std::move(fwd),
                    std::move(bwd));
                have_sampler = true;
                break;
            }
            case sec_extract: {
                ExtractIndex::Parts p;
                p.n = rd.i64();
                p.alpha = rd.i64();
                p.block_width = rd.i64();
                p.level_count = rd.i64();
                p.plain = rd.u8() != 0;
                p.plain_text = rd.sym_vec();
                p.sample_positions = rd.pos_vec();
                p.block_coords = read_coord_vec(rd);
                std::uint64_t lv = rd.u64();
                p.level_coords.resize(lv);
                for (auto& v : p.level_coords) v = read_coord_vec(rd);
                p.window_lo = rd.pos_vec();
                std::uint64_t wc = rd.u64();
                p.window_chars.resize(wc);
                for (auto& v : p.window_chars) v = rd.sym_vec();
                ix.extract_ = ExtractIndex::from_parts(std::move(p));
                break;
            }
            case sec_fingerprint: {
                FingerprintIndex::Parts p;
                p.n = rd.i64();
                p.block_width = rd.i64();
                p.level_count = rd.i64();
                p.q = rd.u64();
                p.base = rd.u64();
                p.seed = rd.u64();
                p.sample_positions = rd.pos_vec();
                std::uint64_t pk = rd.u64();
                p.prefix_kappa.resize(pk);
                for (auto& v : p.prefix_kappa) v = rd.u64();
                p.block_units = read_fp_units(rd);
                std::uint64_t lv = rd.u64();
                p.level_units.resize(lv);
                for (auto& v : p.level_units) v = read_fp_units(rd);
                std::uint64_t ck = rd.u64();
                p.char_kappa.resize(ck);
                for (auto& a : p.char_kappa) {
                    a[0] = rd.u64();
                    a[1] = rd.u64();
                }
                p.exp_lengths = rd.pos_vec();
                ix.fp_ = FingerprintIndex::from_parts(std::move(p));
                break;
            }
            case sec_text: {
                ix.text_ = rd.sym_vec();
                break;
            }
            default:
                // Forward compatibility: an unknown section is skipped.
                continue;
        }
        if (!rd.done()) {
            throw index_format_error("section has trailing bytes");
        }
    }

    if (!have_alphabet || !have_rlfm || !have_toehold || !have_phrases ||
        !have_sampler) {
        throw index_format_error("index file is missing a required section");
    }
    ix.rlfm_ = RlfmIndex::assemble(ix.n_, static_cast<sym_t>(ix.sigma_),
                                   std::move(rlfm_starts),
                                   std::move(rlfm_symbols));
    if (ix.rlfm_.runs_count() != runs) {
        throw index_format_error("header run count mismatch");
    }
    if (ix.sampler_.radius() != radius) {
        throw index_format_error("header sampler radius mismatch");
    }
    if ((flags & flag_extract) && !ix.extract_) {
        throw index_format_error("extract section missing despite flag");
    }
    if ((flags & flag_fingerprint) && !ix.fp_) {
        throw index_format_error("fingerprint section missing despite flag");
    }
    if ((flags & flag_text) && !ix.text_) {
        throw index_format_error("text section missing despite flag");
    }
    return ix;
}

Index load_index(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw index_format_error("cannot open " + path);
    return load_index(f);
}

}  // namespace rik
