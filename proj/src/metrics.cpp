#include "nlsearch/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nlsearch/errors.hpp"

namespace nlsearch {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

class TrigramHashProvider final : public EmbeddingProvider {
  public:
    explicit TrigramHashProvider(std::uint64_t seed) : seed_(seed) {}

    std::size_t dimension() const override { return kDim; }

    std::vector<double> embed(std::string_view text) const override {
        const auto tokens = tokenize(text);
        std::vector<double> out(kDim, 0.0);
        if (tokens.empty()) return out;
        for (const auto& token : tokens) {
            const auto tv = token_vector(token);
            for (std::size_t i = 0; i < kDim; ++i) out[i] += tv[i];
        }
        for (double& x : out) x /= static_cast<double>(tokens.size());
        return out;
    }

  private:
    static constexpr std::size_t kDim = 64;
    std::uint64_t seed_;

    std::vector<double> token_vector(const std::string& token) const {
        const std::string padded = "^" + token + "$";
        std::vector<double> v(kDim, 0.0);
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
            std::uint64_t state = fnv1a(std::string_view(padded).substr(i, 3), seed_);
            for (std::size_t d = 0; d < kDim; ++d) {
                // uniform in [-1, 1); platform-independent by construction
                const std::uint64_t bits = splitmix64(state);
                v[d] += static_cast<double>(bits >> 11) * (2.0 / 9007199254740992.0) - 1.0;
            }
        }
        double norm = 0.0;
        for (const double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& x : v) x /= norm;
        }
        return v;
    }
};

}  // namespace

std::shared_ptr<EmbeddingProvider> default_embedding_provider(std::uint64_t seed) {
    return std::make_shared<TrigramHashProvider>(seed);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::set<std::string> value_set(const DocumentValue& value) {
    std::set<std::string> out;
    if (const auto* s = std::get_if<std::string>(&value)) {
        out.insert(to_lower(*s));
    } else if (const auto* list = std::get_if<StringList>(&value)) {
        for (const auto& v : *list) out.insert(to_lower(v));
    } else if (const auto* map = std::get_if<LocationMap>(&value)) {
        for (const auto& [sub, list] : *map) {
            for (const auto& v : list) out.insert(sub + ":" + to_lower(v));
        }
    } else {
        throw ContractViolation("value_set on integer value");
    }
    return out;
}

std::string flatten_text(const DocumentValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return to_lower(*s);
    if (const auto* list = std::get_if<StringList>(&value)) {
        std::vector<std::string> items;
        items.reserve(list->size());
        for (const auto& v : *list) items.push_back(to_lower(v));
        std::sort(items.begin(), items.end());
        std::string out;
        for (const auto& v : items) {
            if (!out.empty()) out += ' ';
            out += v;
        }
        return out;
    }
    throw ContractViolation("flatten_text on non-text value");
}

double exact_match(const DocumentValue& a, const DocumentValue& b) {
    if (a.index() != b.index()) throw ContractViolation("exact_match: shape mismatch");
    if (const auto* ai = std::get_if<std::int64_t>(&a)) {
        return *ai == std::get<std::int64_t>(b) ? 1.0 : 0.0;
    }
    if (const auto* as = std::get_if<std::string>(&a)) {
        return to_lower(*as) == to_lower(std::get<std::string>(b)) ? 1.0 : 0.0;
    }
    // lists and maps compare as lowercased sorted sets
    return value_set(a) == value_set(b) ? 1.0 : 0.0;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double cosine_sim(std::string_view a, std::string_view b) {
    const auto ta = tokenize(a);
    const auto tb = tokenize(b);
    if (ta.empty() || tb.empty()) return 0.0;
    std::map<std::string, double> fa, fb;
    for (const auto& t : ta) fa[t] += 1.0;
    for (const auto& t : tb) fb[t] += 1.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, f] : fa) {
        na += f * f;
        auto it = fb.find(t);
        if (it != fb.end()) dot += f * it->second;
    }
    for (const auto& [t, f] : fb) nb += f * f;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double semantic_sim(std::string_view a, std::string_view b, const EmbeddingProvider& provider) {
    const auto va = provider.embed(a);
    const auto vb = provider.embed(b);
    if (va.size() != provider.dimension() || vb.size() != provider.dimension()) {
        throw EmbeddingError("provider returned a vector of the wrong dimension");
    }
    const double c = cosine(va, vb);
    if (c == 0.0) {
        // zero vector against zero vector: fall back to literal equality
        const bool a_zero = std::all_of(va.begin(), va.end(), [](double x) { return x == 0.0; });
        const bool b_zero = std::all_of(vb.begin(), vb.end(), [](double x) { return x == 0.0; });
        if (a_zero && b_zero) return a == b ? 1.0 : 0.0;
    }
    return std::clamp(c, 0.0, 1.0);
}

std::vector<ScoringUnit> scoring_units(const SchemaRegistry& schema) {
    std::vector<ScoringUnit> units;
    for (const auto& spec : schema.fields()) {
        if (spec.kind == FieldKind::Integer) {
            for (const auto& unit : bound_units(spec)) {
                units.push_back({unit, FieldKind::Integer, &spec});
            }
        } else {
            units.push_back({spec.name, spec.kind, &spec});
        }
    }
    return units;
}

FieldScore score_field(const ScoringUnit& unit, const DocumentValue* gt,
                       const DocumentValue* pred, const EmbeddingProvider& provider) {
    FieldScore out;
    out.field = unit.name;
    const auto& metrics = metrics_for(unit.kind);
    if (!gt && !pred) {
        for (const auto m : metrics) out.scores[m] = 1.0;
        return out;
    }
    if (!gt || !pred) {
        for (const auto m : metrics) out.scores[m] = 0.0;
        return out;
    }
    for (const auto m : metrics) {
        switch (m) {
            case MetricKind::Exact:
                out.scores[m] = exact_match(*gt, *pred);
                break;
            case MetricKind::Jaccard:
                out.scores[m] = jaccard(value_set(*gt), value_set(*pred));
                break;
            case MetricKind::Cosine:
                out.scores[m] = cosine_sim(flatten_text(*gt), flatten_text(*pred));
                break;
            case MetricKind::Semantic:
                out.scores[m] = semantic_sim(flatten_text(*gt), flatten_text(*pred), provider);
                break;
        }
    }
    return out;
}

QueryScore score_query(const SearchEntityDocument& gt, const SearchEntityDocument& pred,
                       const SchemaRegistry& schema, const EmbeddingProvider& provider,
                       const ScoreOptions& options) {
    QueryScore out;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& unit : scoring_units(schema)) {
        const DocumentValue* g = gt.find(unit.name);
        const DocumentValue* p = pred.find(unit.name);
        if (!options.all_units && !g && !p) continue;
        FieldScore fs = score_field(unit, g, p, provider);
        for (const auto& [metric, score] : fs.scores) {
            (void)metric;
            sum += score;
            ++count;
        }
        out.field_scores.push_back(std::move(fs));
    }
    out.average = count == 0 ? 1.0 : sum / static_cast<double>(count);
    return out;
}

}  // namespace nlsearch
