#include "plq/json_io.hpp"

#include <fstream>

namespace plq {

namespace {

Json complex_list(const Mat& m) {
    Json out = Json::array();
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c)
            out.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    return out;
}

Mat complex_matrix(const Json& j, long rows, long cols) {
    if (static_cast<long>(j.size()) != rows * cols)
        throw std::domain_error("json: matrix entry count mismatch");
    Mat m(rows, cols);
    long k = 0;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) {
            m(r, c) = cplx(j[k][0].get<double>(), j[k][1].get<double>());
            ++k;
        }
    return m;
}

Json sites_to_json(const SiteList& sites) {
    Json out = Json::array();
    for (const Site& s : sites) out.push_back(Json::array({s.x, s.y}));
    return out;
}

SiteList sites_from_json(const Json& j) {
    SiteList out;
    for (const auto& e : j) out.push_back({e[0].get<int>(), e[1].get<int>()});
    return out;
}

}  // namespace

Json local_operator_to_json(const LocalOperator& op) {
    Json j;
    j["support"] = sites_to_json(op.support());
    j["dims"] = op.site_dims();
    j["matrix"] = complex_list(op.matrix());
    return j;
}

LocalOperator local_operator_from_json(const Json& j) {
    SiteList support = sites_from_json(j.at("support"));
    std::vector<long> dims = j.at("dims").get<std::vector<long>>();
    long total = 1;
    for (long d : dims) total *= d;
    return LocalOperator(support, dims, complex_matrix(j.at("matrix"), total, total));
}

Json model_to_json(const LatticeModel& model) {
    Json j;
    if (model.lx() == model.ly()) j["L"] = model.lx();
    j["Lx"] = model.lx();
    j["Ly"] = model.ly();
    j["dims"] = model.site_dims();
    Json terms = Json::array();
    for (const ModelTerm& t : model.terms()) {
        Json tj;
        tj["plaquette"] = sites_to_json(t.plaquette);
        tj["P"] = local_operator_to_json(t.projector);
        if (!t.stabilizer_gens.empty()) {
            Json gens = Json::array();
            for (const PauliString& g : t.stabilizer_gens)
                gens.push_back(Json{{"x", g.x}, {"z", g.z}, {"phase", g.phase}});
            tj["stabilizer"] = gens;
        }
        terms.push_back(tj);
    }
    j["terms"] = terms;
    Json meta;
    meta["name"] = model.name;
    meta["seed"] = model.seed;
    if (model.pauli_context()) meta["qubits_per_site"] = model.pauli_context()->qubits_per_site();
    for (const auto& [k, v] : model.meta) meta[k] = v;
    j["meta"] = meta;
    return j;
}

LatticeModel model_from_json(const Json& j) {
    int lx = j.contains("Lx") ? j.at("Lx").get<int>() : j.at("L").get<int>();
    int ly = j.contains("Ly") ? j.at("Ly").get<int>() : j.at("L").get<int>();
    std::vector<long> dims = j.at("dims").get<std::vector<long>>();
    LatticeModel model(lx, ly, dims);
    if (j.contains("meta")) {
        const Json& meta = j.at("meta");
        if (meta.contains("name")) model.name = meta.at("name").get<std::string>();
        if (meta.contains("seed")) model.seed = meta.at("seed").get<std::uint64_t>();
        if (meta.contains("qubits_per_site"))
            model.set_pauli_context(
                PauliContext(model.all_sites(), meta.at("qubits_per_site").get<int>()));
    }
    for (const auto& tj : j.at("terms")) {
        ModelTerm t;
        t.plaquette = sites_from_json(tj.at("plaquette"));
        t.projector = local_operator_from_json(tj.at("P"));
        if (tj.contains("stabilizer")) {
            for (const auto& gj : tj.at("stabilizer")) {
                PauliString g;
                g.x = gj.at("x").get<std::uint64_t>();
                g.z = gj.at("z").get<std::uint64_t>();
                g.phase = gj.at("phase").get<int>();
                t.stabilizer_gens.push_back(g);
            }
        }
        model.add_term(std::move(t));
    }
    return model;
}

Json mpo_to_json(const MPO& mpo) {
    Json j;
    j["length"] = mpo.length();
    j["phys_dims"] = mpo.phys_dims();
    Json ts = Json::array();
    for (long i = 0; i < mpo.length(); ++i) {
        const MpoTensor& t = mpo.tensor(i);
        Json tj;
        tj["shape"] = Json::array({t.l, t.r, t.p, t.q});
        Json data = Json::array();
        for (const cplx& v : t.data) data.push_back(Json::array({v.real(), v.imag()}));
        tj["data"] = data;
        ts.push_back(tj);
    }
    j["tensors"] = ts;
    return j;
}

MPO mpo_from_json(const Json& j) {
    std::vector<MpoTensor> tensors;
    for (const auto& tj : j.at("tensors")) {
        const auto& sh = tj.at("shape");
        MpoTensor t(sh[0].get<long>(), sh[1].get<long>(), sh[2].get<long>(), sh[3].get<long>());
        const auto& data = tj.at("data");
        if (data.size() != t.data.size())
            throw std::domain_error("json: MPO tensor size mismatch");
        for (std::size_t k = 0; k < t.data.size(); ++k)
            t.data[k] = cplx(data[k][0].get<double>(), data[k][1].get<double>());
        tensors.push_back(std::move(t));
    }
    return MPO(std::move(tensors));
}

Json witness_to_json(const Witness& w) {
    Json j;
    Json entries = Json::array();
    for (const Witness::Entry& e : w.entries)
        entries.push_back(Json{{"column", e.column}, {"mpo", mpo_to_json(e.op)}});
    j["entries"] = entries;
    return j;
}

Witness witness_from_json(const Json& j) {
    Witness w;
    for (const auto& e : j.at("entries"))
        w.entries.push_back({e.at("column").get<int>(), mpo_from_json(e.at("mpo"))});
    std::sort(w.entries.begin(), w.entries.end(),
              [](const Witness::Entry& a, const Witness::Entry& b) { return a.column < b.column; });
    return w;
}

Json ftable_to_json(const FSymbolTable& t) {
    Json j;
    Json labels = Json::array();
    for (int k = 0; k < t.n_labels(); ++k) labels.push_back(k);
    j["labels"] = labels;
    Json fusion = Json::array();
    const int n = t.n_labels();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (t.admissible(a, b, c)) fusion.push_back(Json::array({a, b, c}));
    j["fusion"] = fusion;
    Json f;
    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        for (int nn = 0; nn < n; ++nn) {
                            cplx v = t.f(i, jj, m, k, l, nn);
                            if (v == 0.0) continue;
                            std::string key = std::to_string(i) + "," + std::to_string(jj) + "," +
                                              std::to_string(m) + "," + std::to_string(k) + "," +
                                              std::to_string(l) + "," + std::to_string(nn);
                            f[key] = Json::array({v.real(), v.imag()});
                        }
    j["F"] = f;
    if (!t.quantum_dims().empty()) j["quantum_dims"] = t.quantum_dims();
    return j;
}

FSymbolTable ftable_from_json(const Json& j) {
    const int n = static_cast<int>(j.at("labels").size());
    std::vector<char> fusion(n * n * n, 0);
    for (const auto& e : j.at("fusion"))
        fusion[(e[0].get<int>() * n + e[1].get<int>()) * n + e[2].get<int>()] = 1;
    std::vector<cplx> f(static_cast<std::size_t>(n) * n * n * n * n * n, 0.0);
    for (const auto& [key, val] : j.at("F").items()) {
        std::vector<int> idx;
        std::size_t pos = 0;
        while (pos < key.size()) {
            std::size_t next = key.find(',', pos);
            if (next == std::string::npos) next = key.size();
            idx.push_back(std::stoi(key.substr(pos, next - pos)));
            pos = next + 1;
        }
        if (idx.size() != 6) throw std::domain_error("json: bad F key");
        f[((((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3]) * n + idx[4]) * n + idx[5]] =
            cplx(val[0].get<double>(), val[1].get<double>());
    }
    std::vector<double> qdims;
    if (j.contains("quantum_dims")) qdims = j.at("quantum_dims").get<std::vector<double>>();
    return FSymbolTable(n, std::move(fusion), std::move(f), std::move(qdims));
}

RegionSpec region_from_json(const LatticeModel& model, const Json& j) {
    RegionSpec r = boundary_of(model, sites_from_json(j.at("S")));
    if (j.contains("A")) r.A = sorted_sites(sites_from_json(j.at("A")));
    if (j.contains("X")) r.X = sorted_sites(sites_from_json(j.at("X")));
    if (j.contains("Y")) r.Y = sorted_sites(sites_from_json(j.at("Y")));
    return r;
}

Json verification_report_to_json(const VerificationReport& rep) {
    Json j;
    switch (rep.verdict) {
        case Verdict::Accept: j["verdict"] = "accept"; break;
        case Verdict::Reject: j["verdict"] = "reject"; break;
        case Verdict::Unable: j["verdict"] = "unable"; break;
    }
    j["reason"] = rep.reason;
    Json cs = Json::array();
    for (const cplx& c : rep.constants) cs.push_back(Json::array({c.real(), c.imag()}));
    j["c"] = cs;
    j["residuals"] = Json{{"projector", rep.projector_residuals},
                          {"commutation", rep.commutation_residuals},
                          {"proportionality", rep.proportionality_residuals}};
    j["final_trace"] = rep.final_trace;
    j["trace"] = rep.total_trace;
    j["max_bond"] = rep.max_bond_seen;
    return j;
}

Json validation_report_to_json(const ValidationReport& rep) {
    Json j;
    j["pass"] = rep.pass;
    j["tol"] = rep.tol;
    j["max_projector_residual"] = rep.max_projector_residual;
    j["max_commutator_residual"] = rep.max_commutator_residual;
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace plq
