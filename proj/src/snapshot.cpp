#include "pal/snapshot.hpp"

#include <fstream>

#include <json.hpp>

namespace pal {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vec_to_json(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json mat_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Eigen::VectorXd vec_from_json(const ordered_json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i];
    return v;
}

Eigen::MatrixXd mat_from_json(const ordered_json& rows) {
    if (rows.empty()) return {};
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

}  // namespace

std::string save_model(const Domain& d, const PerceptionTable& pt) {
    if (pt.size() != d.size())
        throw std::invalid_argument("snapshot needs one perception per state");
    ordered_json j;
    j["format"] = "pal-model";
    j["version"] = 1;

    ordered_json schema = ordered_json::array();
    for (std::size_t i = 0; i < d.schema().variable_count(); ++i) {
        const auto& var = d.schema().variable(i);
        schema.push_back({{"name", var.name}, {"values", var.values}});
    }
    j["schema"] = schema;

    ordered_json actions = ordered_json::array();
    for (ActionId a = 0; a < d.action_count(); ++a) actions.push_back(d.action_name(a));
    j["actions"] = actions;

    ordered_json states = ordered_json::array();
    for (StateId s = 0; s < d.size(); ++s) states.push_back(d.assignment(s));
    j["states"] = states;

    ordered_json gamma = ordered_json::array();
    for (StateId s = 0; s < d.size(); ++s)
        for (ActionId a = 0; a < d.action_count(); ++a) {
            StateId t = d.successor(s, a);
            if (t != kNoState)
                gamma.push_back({{"s", s}, {"a", a}, {"to", t}});
        }
    j["gamma"] = gamma;

    j["perception"] = {{"dim", pt.dim()},
                       {"sigma_floor", pt.sigma_floor()},
                       {"p_init_sigma", mat_to_json(pt.p_init_sigma())}};
    ordered_json percs = ordered_json::array();
    for (StateId s = 0; s < d.size(); ++s) {
        const auto& g = pt.at(s);
        percs.push_back({{"mu", vec_to_json(g.mu)},
                         {"sigma", mat_to_json(g.sigma)},
                         {"count", g.count},
                         {"ml_mean", vec_to_json(g.ml_mean)},
                         {"ml_m2", mat_to_json(g.ml_m2)}});
    }
    j["perceptions"] = percs;
    return j.dump(2) + "\n";
}

ModelSnapshot load_model(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    if (j.value("format", "") != "pal-model")
        throw std::invalid_argument("not a model snapshot");

    StateVarSchema schema;
    for (const auto& var : j.at("schema"))
        schema.add_variable(var.at("name"), var.at("values"));
    std::vector<std::string> actions = j.at("actions");

    Domain d(std::move(schema), std::move(actions));
    for (const auto& st : j.at("states")) {
        Assignment a = st.get<Assignment>();
        d.intern(a);
    }
    for (const auto& e : j.at("gamma"))
        d.set_successor(e.at("s"), e.at("a"), e.at("to"));

    const auto& pj = j.at("perception");
    PerceptionTable pt(pj.at("dim"), mat_from_json(pj.at("p_init_sigma")),
                       pj.at("sigma_floor"));
    const auto& percs = j.at("perceptions");
    for (StateId s = 0; s < d.size(); ++s) {
        const auto& g = percs.at(s);
        pt.restore(s, vec_from_json(g.at("mu")), mat_from_json(g.at("sigma")), g.at("count"),
                   vec_from_json(g.at("ml_mean")), mat_from_json(g.at("ml_m2")));
    }
    return {std::move(d), std::move(pt)};
}

void save_model_file(const Domain& d, const PerceptionTable& pt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << save_model(d, pt);
}

ModelSnapshot load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_model(text);
}

}  // namespace pal
