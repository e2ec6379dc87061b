#include "cfadv/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "cfadv/ioutil.hpp"
#include "cfadv/rng.hpp"

namespace cfadv {

void FeatureSchema::validate() const {
    std::set<std::string> seen;
    for (const auto& col : columns) {
        if (col.name.empty()) throw SchemaError("schema: empty column name");
        if (!seen.insert(col.name).second)
            throw SchemaError("schema: duplicate column name '" + col.name + "'");
        if (col.name == label_column)
            throw SchemaError("schema: label column '" + label_column + "' listed as a feature");
        if (const auto* cat = std::get_if<CategoricalKind>(&col.kind)) {
            if (cat->levels.empty())
                throw SchemaError("schema: categorical column '" + col.name + "' has no levels");
            std::set<std::string> lv(cat->levels.begin(), cat->levels.end());
            if (lv.size() != cat->levels.size())
                throw SchemaError("schema: duplicate level in column '" + col.name + "'");
        }
    }
    if (label_column.empty()) throw SchemaError("schema: missing label column");
}

std::size_t FeatureSchema::feature_dim() const {
    std::size_t d = 0;
    for (const auto& col : columns) {
        if (const auto* cat = std::get_if<CategoricalKind>(&col.kind))
            d += cat->levels.size();
        else
            d += 1;
    }
    return d;
}

std::vector<std::string> FeatureSchema::feature_names() const {
    std::vector<std::string> names;
    for (const auto& col : columns) {
        if (const auto* cat = std::get_if<CategoricalKind>(&col.kind)) {
            for (const auto& lv : cat->levels) names.push_back(col.name + "=" + lv);
        } else {
            names.push_back(col.name);
        }
    }
    return names;
}

Dataset gen_gaussian_mixture(std::size_t n, const Vec& mu1, const Vec& mu2, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_gaussian_mixture: n must be >= 2");
    if (mu1.empty() || mu1.size() != mu2.size())
        throw std::invalid_argument("gen_gaussian_mixture: mean dimensions must match and be >= 1");
    for (double v : mu1)
        if (!std::isfinite(v)) throw std::invalid_argument("gen_gaussian_mixture: non-finite mu1");
    for (double v : mu2)
        if (!std::isfinite(v)) throw std::invalid_argument("gen_gaussian_mixture: non-finite mu2");

    const std::size_t d = mu1.size();
    Rng rng(seed);
    Dataset ds;
    ds.X = Mat(n, d);
    ds.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);  // alternate keeps counts within 1
        const Vec& mu = (cls == 0) ? mu1 : mu2;
        for (std::size_t j = 0; j < d; ++j) ds.X(i, j) = mu[j] + rng.normal();
        ds.y[i] = cls;
    }
    for (std::size_t j = 0; j < d; ++j) {
        ds.schema.columns.push_back({"x" + std::to_string(j + 1), NumericKind{}});
    }
    ds.schema.label_column = "label";
    ds.schema.positive_label = "1";
    ds.scaling.assign(d, {0.0, 1.0});
    ds.split.train.resize(n);
    std::iota(ds.split.train.begin(), ds.split.train.end(), std::size_t{0});
    return ds;
}

namespace {

// RFC-4180 field splitting: quoted fields may contain commas, doubled quotes
// and newlines. Returns one record per row.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text,
                                                        const std::string& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> rec;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        rec.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(rec);
        rec.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (field_started && !field.empty())
                    throw ParseError(path + ": stray quote in unquoted field");
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); field_started = false; break;
            case '\r': break;
            case '\n':
                if (!rec.empty() || !field.empty() || field_started) end_record();
                break;
            default: field += ch; field_started = true; break;
        }
    }
    if (in_quotes) throw ParseError(path + ": unterminated quoted field");
    if (!rec.empty() || !field.empty()) end_record();
    return records;
}

std::string strip_comment_lines(const std::string& text) {
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == '#') {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) return "";
        pos = nl + 1;
    }
    return text.substr(pos);
}

}  // namespace

Dataset load_csv(const std::string& path, const FeatureSchema& schema) {
    schema.validate();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto records = parse_csv_records(strip_comment_lines(buf.str()), path);
    if (records.empty()) throw SchemaError(path + ": missing header row");

    const auto& header = records.front();
    // Map every schema column and the label to its position in the file.
    auto col_pos = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw SchemaError(path + ": header is missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::size_t> feature_pos;
    for (const auto& col : schema.columns) feature_pos.push_back(col_pos(col.name));
    const std::size_t label_pos = col_pos(schema.label_column);
    for (const auto& h : header) {
        const bool known = h == schema.label_column ||
                           std::any_of(schema.columns.begin(), schema.columns.end(),
                                       [&](const auto& c) { return c.name == h; });
        if (!known) throw SchemaError(path + ": header column '" + h + "' not in schema");
    }

    const std::size_t d = schema.feature_dim();
    const std::size_t n = records.size() - 1;
    Dataset ds;
    ds.schema = schema;
    ds.X = Mat(n, d);
    ds.y.resize(n);

    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = records[r + 1];
        const std::size_t row_no = r + 1;  // 1-based data row index for messages
        if (rec.size() != header.size())
            throw ParseError(path + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(header.size()));
        std::size_t out = 0;
        for (std::size_t cidx = 0; cidx < schema.columns.size(); ++cidx) {
            const auto& col = schema.columns[cidx];
            const std::string& cell = rec[feature_pos[cidx]];
            if (cell.empty())
                throw SchemaError(path + ": missing value in row " + std::to_string(row_no) +
                                  ", column '" + col.name + "'");
            if (const auto* cat = std::get_if<CategoricalKind>(&col.kind)) {
                const auto it = std::find(cat->levels.begin(), cat->levels.end(), cell);
                if (it == cat->levels.end())
                    throw SchemaError(path + ": unknown level '" + cell + "' for column '" +
                                      col.name + "' in row " + std::to_string(row_no));
                for (std::size_t l = 0; l < cat->levels.size(); ++l)
                    ds.X(r, out + l) = (l == static_cast<std::size_t>(it - cat->levels.begin()))
                                           ? 1.0
                                           : 0.0;
                out += cat->levels.size();
            } else {
                char* endp = nullptr;
                const double v = std::strtod(cell.c_str(), &endp);
                if (endp == cell.c_str() || *endp != '\0' || !std::isfinite(v))
                    throw ParseError(path + ": non-numeric value '" + cell + "' in row " +
                                     std::to_string(row_no) + ", column '" + col.name + "'");
                ds.X(r, out++) = v;
            }
        }
        const std::string& lab = rec[label_pos];
        if (lab.empty())
            throw SchemaError(path + ": missing label in row " + std::to_string(row_no));
        ds.y[r] = (lab == schema.positive_label) ? 1 : 0;
    }

    ds.scaling.assign(d, {0.0, 1.0});
    ds.split.train.resize(n);
    std::iota(ds.split.train.begin(), ds.split.train.end(), std::size_t{0});
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path, const std::string& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_csv: cannot open '" + path + "'");
    if (!meta.empty()) out << "# " << meta << "\n";
    const auto names = ds.schema.feature_names();
    for (const auto& name : names) out << name << ",";
    out << ds.schema.label_column << "\n";
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < ds.dim(); ++j) out << format_g17(ds.X(i, j)) << ",";
        out << ds.y[i] << "\n";
    }
}

Dataset scale_minmax(const Dataset& ds) {
    if (ds.n() == 0) throw std::invalid_argument("scale_minmax: empty dataset");
    Dataset out = ds;
    out.scaling.resize(ds.dim());
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        double lo = ds.X(0, j), hi = ds.X(0, j);
        for (std::size_t i = 1; i < ds.n(); ++i) {
            lo = std::min(lo, ds.X(i, j));
            hi = std::max(hi, ds.X(i, j));
        }
        out.scaling[j] = {lo, hi};
        for (std::size_t i = 0; i < ds.n(); ++i) {
            out.X(i, j) = (hi > lo) ? (ds.X(i, j) - lo) / (hi - lo) : 0.0;
        }
    }
    return out;
}

Dataset train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("train_test_split: test_fraction must be in (0,1)");
    const std::size_t n = ds.n();
    if (n < 2) throw std::invalid_argument("train_test_split: need at least 2 rows");
    std::size_t test_n = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * test_fraction));
    test_n = std::clamp<std::size_t>(test_n, 1, n - 1);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);

    Dataset out = ds;
    out.split.test.assign(idx.begin(), idx.begin() + test_n);
    out.split.train.assign(idx.begin() + test_n, idx.end());
    return out;
}

}  // namespace cfadv
