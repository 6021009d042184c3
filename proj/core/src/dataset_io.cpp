#include "rsf/dataset_io.hpp"

#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rsf/distances.hpp"
#include "rsf/error.hpp"
#include "rsf/text.hpp"

namespace rsf {

using nlohmann::json;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    // a trailing newline produces no extra record
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

[[noreturn]] void record_error(const std::string& column, std::size_t record,
                               const std::string& what) {
    throw DataError("column '" + column + "' record " + std::to_string(record) + ": " + what);
}

std::vector<FeatureValue> load_numeric(const std::filesystem::path& file,
                                       const std::string& column) {
    std::vector<FeatureValue> values;
    const auto lines = read_lines(file);
    values.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            values.emplace_back(parse_double(lines[i]));
        } catch (const DataError& e) {
            record_error(column, i, e.what());
        }
    }
    return values;
}

std::vector<FeatureValue> load_setseq(const std::filesystem::path& file,
                                      const std::string& column) {
    std::vector<FeatureValue> values;
    const auto lines = read_lines(file);
    values.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            const json j = json::parse(lines[i]);
            if (!j.is_array()) throw DataError("expected an array of arrays of strings");
            SetSequence seq;
            seq.reserve(j.size());
            for (const auto& set : j) {
                seq.push_back(make_item_set(set.get<std::vector<std::string>>()));
            }
            values.emplace_back(std::move(seq));
        } catch (const json::exception& e) {
            record_error(column, i, std::string("bad JSON: ") + e.what());
        } catch (const DataError& e) {
            record_error(column, i, e.what());
        }
    }
    return values;
}

std::vector<FeatureValue> load_timeseries(const std::filesystem::path& file,
                                          const std::string& column) {
    std::vector<FeatureValue> values;
    const auto lines = read_lines(file);
    values.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        TimeSeries series;
        try {
            for (const auto& cell : split_csv_row(lines[i])) series.push_back(parse_double(cell));
        } catch (const DataError& e) {
            record_error(column, i, e.what());
        }
        if (series.empty()) record_error(column, i, "empty series");
        values.emplace_back(std::move(series));
    }
    return values;
}

std::vector<FeatureValue> load_graphs(const std::filesystem::path& file,
                                      const std::string& column) {
    std::vector<FeatureValue> values;
    const auto lines = read_lines(file);
    values.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            const json j = json::parse(lines[i]);
            std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
            for (const auto& e : j.at("edges")) {
                edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
            }
            values.emplace_back(make_graph(j.at("n").get<std::uint32_t>(), std::move(edges)));
        } catch (const json::exception& e) {
            record_error(column, i, std::string("bad JSON: ") + e.what());
        } catch (const DataError& e) {
            record_error(column, i, e.what());
        }
    }
    return values;
}

std::pair<std::vector<FeatureValue>, SquareMatrix> load_precomputed(
    const std::filesystem::path& file, const std::string& column) {
    const auto lines = read_lines(file);
    const std::size_t n = lines.size();
    SquareMatrix matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cells = split_csv_row(lines[i]);
        if (cells.size() != n) {
            record_error(column, i,
                         "matrix row has " + std::to_string(cells.size()) + " entries, expected " +
                             std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            try {
                matrix(i, j) = parse_double(cells[j]);
            } catch (const DataError& e) {
                record_error(column, i, e.what());
            }
        }
    }
    std::vector<FeatureValue> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) values.emplace_back(PrecomputedRef{i});
    return {std::move(values), std::move(matrix)};
}

}  // namespace

Dataset load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open manifest '" + path.string() + "'");
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }

    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    try {
        const auto labels_file = base / manifest.at("labels").at("file").get<std::string>();
        std::vector<std::string> labels = read_lines(labels_file);

        std::vector<FeatureColumn> columns;
        for (const auto& spec : manifest.at("columns")) {
            FeatureColumn col;
            col.name = spec.at("name").get<std::string>();
            col.kind = parse_kind(spec.at("kind").get<std::string>());
            col.measure = spec.at("measure").get<std::string>();
            try {
                resolve_measure(col.kind, col.measure);
            } catch (const DataError& e) {
                throw DataError("column '" + col.name + "': " + e.what());
            }
            const auto file = base / spec.at("file").get<std::string>();
            switch (col.kind) {
                case ValueKind::Numeric: col.values = load_numeric(file, col.name); break;
                case ValueKind::SetSeq: col.values = load_setseq(file, col.name); break;
                case ValueKind::TimeSeries: col.values = load_timeseries(file, col.name); break;
                case ValueKind::Graph: col.values = load_graphs(file, col.name); break;
                case ValueKind::Precomputed: {
                    auto [values, matrix] = load_precomputed(file, col.name);
                    col.values = std::move(values);
                    col.matrix = std::move(matrix);
                    break;
                }
            }
            columns.push_back(std::move(col));
        }

        Dataset ds = make_dataset(std::move(columns), std::move(labels));
        validate_dataset(ds);
        return ds;
    } catch (const json::exception& e) {
        throw FormatError("manifest '" + path.string() + "' is malformed: " + e.what());
    }
}

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    }
    return out.empty() ? "column" : out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

}  // namespace

std::filesystem::path save_dataset(const Dataset& ds, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);

    std::string labels_text;
    for (const auto& label : ds.labels) labels_text += label + "\n";
    write_file(directory / "labels.csv", labels_text);

    json manifest;
    manifest["labels"] = {{"file", "labels.csv"}};
    json columns = json::array();
    for (std::size_t c = 0; c < ds.columns.size(); ++c) {
        const FeatureColumn& col = ds.columns[c];
        std::string filename = "col" + std::to_string(c) + "_" + sanitize(col.name);
        std::string content;
        switch (col.kind) {
            case ValueKind::Numeric: {
                filename += ".csv";
                for (const auto& v : col.values) content += format_double(std::get<double>(v)) + "\n";
                break;
            }
            case ValueKind::SetSeq: {
                filename += ".jsonl";
                for (const auto& v : col.values) {
                    json sets = json::array();
                    for (const auto& set : std::get<SetSequence>(v)) sets.push_back(set);
                    content += sets.dump() + "\n";
                }
                break;
            }
            case ValueKind::TimeSeries: {
                filename += ".csv";
                for (const auto& v : col.values) {
                    const auto& series = std::get<TimeSeries>(v);
                    for (std::size_t i = 0; i < series.size(); ++i) {
                        content += (i ? "," : "") + format_double(series[i]);
                    }
                    content += "\n";
                }
                break;
            }
            case ValueKind::Graph: {
                filename += ".jsonl";
                for (const auto& v : col.values) {
                    const auto& g = std::get<GraphValue>(v);
                    json edges = json::array();
                    for (const auto& [u, w] : g.edges) edges.push_back({u, w});
                    content += json{{"n", g.node_count}, {"edges", std::move(edges)}}.dump() + "\n";
                }
                break;
            }
            case ValueKind::Precomputed: {
                filename += ".csv";
                const SquareMatrix& m = *col.matrix;
                for (std::size_t i = 0; i < m.size(); ++i) {
                    for (std::size_t j = 0; j < m.size(); ++j) {
                        content += (j ? "," : "") + format_double(m(i, j));
                    }
                    content += "\n";
                }
                break;
            }
        }
        write_file(directory / filename, content);
        columns.push_back({{"name", col.name},
                           {"kind", kind_name(col.kind)},
                           {"measure", col.measure},
                           {"file", filename}});
    }
    manifest["columns"] = std::move(columns);

    const auto manifest_path = directory / "manifest.json";
    write_file(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

}  // namespace rsf
