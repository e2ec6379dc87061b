#include "cfadv/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cfadv/ioutil.hpp"

namespace cfadv {

json schema_to_json(const FeatureSchema& schema) {
    json cols = json::array();
    for (const auto& col : schema.columns) {
        json jc;
        jc["name"] = col.name;
        if (const auto* cat = std::get_if<CategoricalKind>(&col.kind))
            jc["kind"] = json{{"categorical", cat->levels}};
        else
            jc["kind"] = "numeric";
        cols.push_back(jc);
    }
    return json{{"columns", cols}, {"label", schema.label_column},
                {"positive", schema.positive_label}};
}

FeatureSchema schema_from_json(const json& j) {
    FeatureSchema schema;
    for (const auto& jc : j.at("columns")) {
        SchemaColumn col;
        col.name = jc.at("name").get<std::string>();
        const auto& kind = jc.at("kind");
        if (kind.is_string() && kind.get<std::string>() == "numeric") {
            col.kind = NumericKind{};
        } else if (kind.is_object() && kind.contains("categorical")) {
            col.kind = CategoricalKind{kind.at("categorical").get<std::vector<std::string>>()};
        } else {
            throw SchemaError("schema json: column '" + col.name + "' has an unknown kind");
        }
        schema.columns.push_back(std::move(col));
    }
    schema.label_column = j.at("label").get<std::string>();
    schema.positive_label = j.at("positive").get<std::string>();
    schema.validate();
    return schema;
}

namespace {

json layer_to_json(const DenseLayer& layer) {
    return json{{"shape", {layer.W.rows, layer.W.cols}},
                {"weights", layer.W.a},
                {"bias", layer.b}};
}

DenseLayer layer_from_json(const json& j) {
    DenseLayer layer;
    const auto shape = j.at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 2) throw std::runtime_error("model json: bad layer shape");
    layer.W = Mat(shape[0], shape[1]);
    layer.W.a = j.at("weights").get<std::vector<double>>();
    layer.b = j.at("bias").get<std::vector<double>>();
    if (layer.W.a.size() != shape[0] * shape[1] || layer.b.size() != shape[0])
        throw std::runtime_error("model json: layer size mismatch");
    return layer;
}

json stack_to_json(const LayerStack& stack) {
    json layers = json::array();
    for (const auto& layer : stack.layers) layers.push_back(layer_to_json(layer));
    return json{{"relu_hidden", stack.relu_hidden}, {"layers", layers}};
}

LayerStack stack_from_json(const json& j) {
    LayerStack stack;
    stack.relu_hidden = j.at("relu_hidden").get<bool>();
    for (const auto& jl : j.at("layers")) stack.layers.push_back(layer_from_json(jl));
    for (std::size_t l = 1; l < stack.layers.size(); ++l) {
        if (stack.layers[l].W.cols != stack.layers[l - 1].W.rows)
            throw std::runtime_error("model json: consecutive layer shapes do not chain");
    }
    return stack;
}

void check_version(const json& j) {
    if (j.value("version", "") != "v1")
        throw std::runtime_error("model json: unsupported version '" +
                                 j.value("version", "<missing>") + "'");
}

}  // namespace

json model_to_json(const ScoringModel& model) {
    if (const auto* lin = std::get_if<LinearModel>(&model)) {
        return json{{"version", "v1"}, {"kind", "linear"}, {"w", lin->w}, {"b", lin->b}};
    }
    const auto& mlp = std::get<MlpModel>(model);
    json j = json{{"version", "v1"}, {"kind", "mlp"}};
    j["net"] = stack_to_json(mlp.net);
    return j;
}

ScoringModel model_from_json(const json& j) {
    check_version(j);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
        LinearModel lin;
        lin.w = j.at("w").get<Vec>();
        lin.b = j.at("b").get<double>();
        return lin;
    }
    if (kind == "mlp") {
        MlpModel mlp{stack_from_json(j.at("net"))};
        if (mlp.net.out_dim() != 1)
            throw std::runtime_error("model json: mlp must end in a single logit");
        return mlp;
    }
    throw std::runtime_error("model json: unknown kind '" + kind + "'");
}

json autoencoder_to_json(const Autoencoder& ae) {
    return json{{"version", "v1"},
                {"kind", "autoencoder"},
                {"latent_dim", ae.latent_dim},
                {"linear", ae.linear},
                {"encoder", stack_to_json(ae.encoder)},
                {"decoder", stack_to_json(ae.decoder)}};
}

Autoencoder autoencoder_from_json(const json& j) {
    check_version(j);
    if (j.at("kind").get<std::string>() != "autoencoder")
        throw std::runtime_error("model json: not an autoencoder file");
    Autoencoder ae;
    ae.latent_dim = j.at("latent_dim").get<std::size_t>();
    ae.linear = j.at("linear").get<bool>();
    ae.encoder = stack_from_json(j.at("encoder"));
    ae.decoder = stack_from_json(j.at("decoder"));
    if (ae.encoder.out_dim() != ae.latent_dim || ae.decoder.in_dim() != ae.latent_dim)
        throw std::runtime_error("model json: encoder/decoder widths disagree with latent_dim");
    return ae;
}

json result_to_json(const GenerationResult& r) {
    json j;
    j["instance"] = r.instance;
    j["method"] = r.method;
    j["success"] = r.success;
    j["x"] = r.x;
    j["x_prime"] = r.x_prime;
    j["delta"] = r.delta;
    j["norms"] = json{{"l1", norm(r.delta, NormOrder::one)},
                      {"l2", norm(r.delta, NormOrder::two)},
                      {"linf", norm(r.delta, NormOrder::inf)}};
    j["radius_used"] = r.radius_used;
    j["iterations"] = r.iterations;
    j["params"] = r.params;
    return j;
}

GenerationResult result_from_json(const json& j) {
    GenerationResult r;
    r.instance = j.at("instance").get<std::size_t>();
    r.method = j.at("method").get<std::string>();
    r.success = j.at("success").get<bool>();
    r.x = j.at("x").get<Vec>();
    r.x_prime = j.at("x_prime").get<Vec>();
    r.delta = j.at("delta").get<Vec>();
    r.radius_used = j.at("radius_used").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.params = j.at("params").get<std::map<std::string, std::string>>();
    return r;
}

void write_results_jsonl(const std::vector<GenerationResult>& results, const std::string& path,
                         const std::string& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    for (const auto& r : results) out << result_to_json(r).dump() << "\n";
}

std::vector<GenerationResult> read_results_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<GenerationResult> results;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        results.push_back(result_from_json(json::parse(line)));
    }
    return results;
}

void write_bounds_csv(const std::vector<BoundRecord>& records, const std::string& path,
                      const std::string& header_comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "instance_id,pair,p,empirical,bound,violated,lambda,c,s,L,r_c,r_nae\n";
    auto field = [](double v) { return std::isnan(v) ? std::string{} : format_g17(v); };
    for (const auto& r : records) {
        out << r.instance_id << ',' << to_string(r.pair) << ',' << to_string(r.p) << ','
            << format_g17(r.empirical) << ',' << format_g17(r.bound) << ','
            << (r.violated ? 1 : 0) << ',' << field(r.lambda) << ',' << field(r.c) << ','
            << field(r.s) << ',' << field(r.L) << ',' << field(r.r_c) << ','
            << field(r.r_nae) << "\n";
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

json read_json_file(const std::string& path) { return json::parse(read_text_file(path)); }

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace cfadv
