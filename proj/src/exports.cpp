#include "narnet/exports.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace narnet {

namespace {

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::map<SpeakerId, std::size_t> node_ids(const std::vector<SpeakerId>& nodes) {
    std::map<SpeakerId, std::size_t> ids;
    for (const auto& name : nodes) ids.emplace(name, ids.size());
    return ids;
}

void write_nodes(std::ostringstream& out, const std::vector<SpeakerId>& nodes) {
    out << "    <nodes>\n";
    std::size_t id = 0;
    for (const auto& name : nodes)
        out << "      <node id=\"" << id++ << "\" label=\"" << xml_escape(name) << "\"/>\n";
    out << "    </nodes>\n";
}

}  // namespace

std::string to_gexf(const DynamicGraphSeries& series) {
    // Union of nodes and pairs over the snapshots; weights become attribute
    // spells, one per snapshot, ending where the next snapshot begins.
    std::vector<SpeakerId> nodes;
    std::map<PairKey, std::vector<std::pair<int, double>>> spans;
    std::set<SpeakerId> node_set;
    for (const auto& snapshot : series.snapshots) {
        node_set.insert(snapshot.graph.nodes.begin(), snapshot.graph.nodes.end());
        for (const auto& [pair, w] : snapshot.graph.edges)
            spans[pair].emplace_back(snapshot.scene_index, w);
    }
    nodes.assign(node_set.begin(), node_set.end());
    auto ids = node_ids(nodes);

    int end_scene = series.snapshots.empty() ? 1 : series.snapshots.back().scene_index + 1;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
    out << "  <graph mode=\"dynamic\" defaultedgetype=\"undirected\" timeformat=\"double\""
        << " start=\"1\" end=\"" << end_scene << "\">\n";
    out << "    <attributes class=\"edge\" mode=\"dynamic\">\n";
    out << "      <attribute id=\"weight\" title=\"weight\" type=\"double\"/>\n";
    out << "    </attributes>\n";
    write_nodes(out, nodes);
    out << "    <edges>\n";
    std::size_t edge_id = 0;
    for (const auto& [pair, values] : spans) {
        out << "      <edge id=\"" << edge_id++ << "\" source=\"" << ids.at(pair.a)
            << "\" target=\"" << ids.at(pair.b) << "\">\n";
        out << "        <attvalues>\n";
        for (std::size_t k = 0; k < values.size(); ++k) {
            int start = values[k].first;
            int end = k + 1 < values.size() ? values[k + 1].first : end_scene;
            out << "          <attvalue for=\"weight\" value=\"" << fmt_num(values[k].second)
                << "\" start=\"" << start << "\" end=\"" << end << "\"/>\n";
        }
        out << "        </attvalues>\n";
        out << "      </edge>\n";
    }
    out << "    </edges>\n";
    out << "  </graph>\n";
    out << "</gexf>\n";
    return out.str();
}

std::string to_gexf(const WeightedGraph& graph) {
    auto ids = node_ids(graph.nodes);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n";
    out << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n";
    write_nodes(out, graph.nodes);
    out << "    <edges>\n";
    std::size_t edge_id = 0;
    for (const auto& [pair, w] : graph.edges)
        out << "      <edge id=\"" << edge_id++ << "\" source=\"" << ids.at(pair.a)
            << "\" target=\"" << ids.at(pair.b) << "\" weight=\"" << fmt_num(w) << "\"/>\n";
    out << "    </edges>\n";
    out << "  </graph>\n";
    out << "</gexf>\n";
    return out.str();
}

std::string series_to_csv(const DynamicGraphSeries& series) {
    std::ostringstream out;
    out << "scene,char_i,char_j,weight,method,params\n";
    std::string method = method_name(series.method);
    std::string params = series.params.label();
    for (const auto& snapshot : series.snapshots)
        for (const auto& [pair, w] : snapshot.graph.edges)
            out << snapshot.scene_index << ',' << pair.a << ',' << pair.b << ','
                << fmt_num(w) << ',' << method << ',' << params << "\n";
    return out.str();
}

std::optional<DynamicGraphSeries> series_from_csv(std::string_view text,
                                                  const std::string& source_name,
                                                  std::vector<Diagnostic>& diagnostics) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "scene,char_i,char_j,weight,method,params") {
        diagnostics.push_back({source_name, 1, true, "bad series CSV header"});
        return std::nullopt;
    }
    DynamicGraphSeries series;
    std::optional<std::string> method_token, params_token;
    std::map<int, std::map<PairKey, double>> rows;
    std::set<SpeakerId> names;
    bool failed = false;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::string line = lines[k];
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        int line_no = static_cast<int>(k + 1);
        if (fields.size() != 6) {
            diagnostics.push_back({source_name, line_no, true, "expected 6 columns"});
            failed = true;
            continue;
        }
        int scene = 0;
        double weight = 0.0;
        try {
            scene = std::stoi(trim(fields[0]));
            weight = std::stod(trim(fields[3]));
        } catch (const std::exception&) {
            diagnostics.push_back({source_name, line_no, true, "bad scene or weight value"});
            failed = true;
            continue;
        }
        std::string char_i = trim(fields[1]), char_j = trim(fields[2]);
        if (scene < 1 || char_i.empty() || char_j.empty() || char_i == char_j) {
            diagnostics.push_back({source_name, line_no, true, "bad series row"});
            failed = true;
            continue;
        }
        if (!method_token) {
            method_token = trim(fields[4]);
            params_token = trim(fields[5]);
        } else if (*method_token != trim(fields[4]) || *params_token != trim(fields[5])) {
            diagnostics.push_back({source_name, line_no, true,
                                   "method/params change midway through the series"});
            failed = true;
            continue;
        }
        names.insert(char_i);
        names.insert(char_j);
        rows[scene][PairKey(char_i, char_j)] = weight;
    }
    if (!method_token) {
        diagnostics.push_back({source_name, 0, true, "series CSV has no rows"});
        return std::nullopt;
    }
    auto method = parse_method_name(*method_token);
    if (!method) {
        diagnostics.push_back({source_name, 0, true, "unknown method '" + *method_token + "'"});
        return std::nullopt;
    }
    if (failed) return std::nullopt;

    series.method = *method;
    for (const auto& piece : split(*params_token, ';')) {
        if (piece.empty()) continue;
        auto eq = piece.find('=');
        if (eq == std::string::npos) continue;
        std::string key = piece.substr(0, eq), value = piece.substr(eq + 1);
        try {
            if (key == "window") series.params.window = std::stoi(value);
            if (key == "stride") series.params.stride = std::stoi(value);
            if (key == "lambda") series.params.lambda = std::stod(value);
        } catch (const std::exception&) {
            diagnostics.push_back({source_name, 0, true, "bad params field '" + piece + "'"});
            return std::nullopt;
        }
    }
    std::vector<SpeakerId> nodes(names.begin(), names.end());
    WeightScheme scheme = series.method == SeriesMethod::NarrativeSmoothing
                              ? WeightScheme::Normalized
                              : WeightScheme::Seconds;
    for (auto& [scene, edges] : rows) {
        WeightedGraph graph;
        graph.nodes = nodes;
        graph.scheme = scheme;
        graph.edges = std::move(edges);
        series.snapshots.push_back({scene, std::move(graph)});
    }
    return series;
}

std::string interactions_to_csv(const std::vector<DirectedInteraction>& interactions) {
    std::ostringstream out;
    out << "scene,from,to,count,seconds\n";
    for (const auto& row : interactions)
        out << row.scene_index << ',' << row.from << ',' << row.to << ',' << row.count << ','
            << fmt_num(row.seconds()) << "\n";
    return out.str();
}

std::string scene_values_to_csv(const std::vector<std::pair<int, double>>& values) {
    std::ostringstream out;
    out << "scene,value\n";
    for (const auto& [scene, value] : values) out << scene << ',' << fmt_num(value) << "\n";
    return out.str();
}

std::string hypotheses_to_tsv(const std::vector<std::vector<AddresseeHypothesis>>& hypotheses) {
    std::ostringstream out;
    out << "# utterance_id\taddressees\trule\n";
    for (const auto& scene : hypotheses) {
        for (const auto& hyp : scene) {
            out << hyp.utterance_id << '\t';
            if (hyp.addressees.empty()) {
                out << '~';
            } else {
                bool first = true;
                for (const auto& name : hyp.addressees) {
                    if (!first) out << ',';
                    out << name;
                    first = false;
                }
            }
            out << '\t' << (hyp.rule ? rule_name(*hyp.rule) : "-") << "\n";
        }
    }
    return out.str();
}

std::optional<std::vector<std::vector<AddresseeHypothesis>>> hypotheses_from_tsv(
    std::string_view text, const Corpus& corpus, const std::string& source_name,
    std::vector<Diagnostic>& diagnostics) {
    std::map<int, std::pair<std::size_t, std::size_t>> location;  // id -> (scene slot, position)
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i)
        for (std::size_t j = 0; j < corpus.scenes[i].utterances.size(); ++j)
            location[corpus.scenes[i].utterances[j].id] = {i, j};

    std::vector<std::vector<AddresseeHypothesis>> out(corpus.scenes.size());
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i)
        out[i].resize(corpus.scenes[i].utterances.size());

    std::set<int> seen;
    bool failed = false;
    auto lines = split(text, '\n');
    for (std::size_t k = 0; k < lines.size(); ++k) {
        std::string line = lines[k];
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        int line_no = static_cast<int>(k + 1);
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            diagnostics.push_back({source_name, line_no, true,
                                   "expected utterance_id<TAB>addressees<TAB>rule"});
            failed = true;
            continue;
        }
        int id = -1;
        try {
            id = std::stoi(trim(fields[0]));
        } catch (const std::exception&) {
        }
        auto loc = location.find(id);
        if (loc == location.end()) {
            diagnostics.push_back({source_name, line_no, true,
                                   "unknown utterance id '" + trim(fields[0]) + "'"});
            failed = true;
            continue;
        }
        if (!seen.insert(id).second) {
            diagnostics.push_back({source_name, line_no, true,
                                   "duplicate hypothesis for utterance " + std::to_string(id)});
            failed = true;
            continue;
        }
        AddresseeHypothesis hyp;
        hyp.utterance_id = id;
        std::string addressees = trim(fields[1]);
        if (addressees != "~") {
            for (const auto& part : split(addressees, ',')) {
                std::string name = trim(part);
                if (name.empty()) {
                    diagnostics.push_back({source_name, line_no, true, "bad addressee list"});
                    failed = true;
                    break;
                }
                hyp.addressees.insert(name);
            }
        }
        std::string rule_token = trim(fields[2]);
        if (rule_token != "-") {
            auto rule = parse_rule_name(rule_token);
            if (!rule) {
                diagnostics.push_back({source_name, line_no, true,
                                       "unknown rule '" + rule_token + "'"});
                failed = true;
                continue;
            }
            hyp.rule = rule;
        }
        if (hyp.addressees.empty() != !hyp.rule.has_value()) {
            diagnostics.push_back({source_name, line_no, true,
                                   "rule must be present exactly when addressees are"});
            failed = true;
            continue;
        }
        out[loc->second.first][loc->second.second] = std::move(hyp);
    }
    // Rows may legitimately cover a subset; missing utterances stay
    // unassigned, but ids must line up where present.
    for (std::size_t i = 0; i < corpus.scenes.size(); ++i)
        for (std::size_t j = 0; j < corpus.scenes[i].utterances.size(); ++j)
            if (!seen.count(corpus.scenes[i].utterances[j].id))
                out[i][j].utterance_id = corpus.scenes[i].utterances[j].id;
    if (failed) return std::nullopt;
    return out;
}

}  // namespace narnet
