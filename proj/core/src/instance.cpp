#include "eax/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace eax {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::string line_message(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
    : std::runtime_error(line_message(line, what)), kind_(kind), line_(line) {}

Instance::Instance(std::string name, std::vector<Point> coords, int neighbor_k)
    : name_(std::move(name)), coords_(std::move(coords)), neighbor_k_(neighbor_k) {
    const int n = dimension();
    if (n < 4) throw std::invalid_argument("instance needs at least 4 vertices");
    if (neighbor_k < 1) throw std::invalid_argument("neighbor_k must be positive");

    const int k = std::min(neighbor_k, n - 1);
    neighbors_.resize(n);
    std::vector<std::pair<Length, Vertex>> scratch;
    scratch.reserve(n - 1);
    for (Vertex v = 0; v < n; ++v) {
        scratch.clear();
        for (Vertex w = 0; w < n; ++w) {
            if (w != v) scratch.emplace_back(dist(v, w), w);
        }
        std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
        auto& list = neighbors_[v];
        list.reserve(k);
        for (int i = 0; i < k; ++i) list.push_back(scratch[i].second);
    }
}

Length Instance::distance(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= dimension() || v >= dimension()) {
        throw std::out_of_range("vertex id out of range");
    }
    return dist(u, v);
}

void Instance::set_optimum(Length optimum, std::optional<std::vector<Vertex>> tour) {
    if (optimum < 0) throw std::invalid_argument("optimum must be nonnegative");
    if (tour) {
        const int n = dimension();
        if (static_cast<int>(tour->size()) != n) {
            throw std::invalid_argument("optimal tour has wrong size");
        }
        std::vector<char> seen(n, 0);
        Length len = 0;
        for (std::size_t i = 0; i < tour->size(); ++i) {
            const Vertex v = (*tour)[i];
            if (v < 0 || v >= n || seen[v]) {
                throw std::invalid_argument("optimal tour is not a permutation");
            }
            seen[v] = 1;
            len += dist(v, (*tour)[(i + 1) % tour->size()]);
        }
        if (len != optimum) {
            throw std::invalid_argument("optimal tour length " + std::to_string(len) +
                                        " disagrees with optimum " + std::to_string(optimum));
        }
    }
    known_optimum_ = optimum;
    optimal_tour_ = std::move(tour);
}

Instance parse_tsplib(std::string_view text, int neighbor_k) {
    std::string name;
    std::optional<int> dimension;
    std::optional<std::string> weight_type;
    std::vector<Point> coords;
    bool in_coords = false;
    std::size_t section_line = 0;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line == "EOF") break;

        if (in_coords) {
            const auto fields = split_ws(line);
            const char lead = fields.front().front();
            if (std::isdigit(static_cast<unsigned char>(lead)) || lead == '-' || lead == '+') {
                long id = 0;
                Point p;
                if (fields.size() != 3 || !parse_number(fields[0], id) ||
                    !parse_number(fields[1], p.x) || !parse_number(fields[2], p.y)) {
                    throw ParseError(ParseErrorKind::NonNumericCoordinate, line_no,
                                     "expected numeric `id x y`");
                }
                if (static_cast<int>(coords.size()) >= *dimension) {
                    throw ParseError(ParseErrorKind::CoordinateCountMismatch, line_no,
                                     "more coordinate lines than DIMENSION");
                }
                coords.push_back(p);
                continue;
            }
            // A keyword closes the section.
            in_coords = false;
        }

        if (line == "NODE_COORD_SECTION" || line.starts_with("NODE_COORD_SECTION")) {
            if (!dimension || !weight_type || name.empty()) {
                throw ParseError(ParseErrorKind::MalformedHeader, line_no,
                                 "NAME, DIMENSION and EDGE_WEIGHT_TYPE must precede NODE_COORD_SECTION");
            }
            in_coords = true;
            section_line = line_no;
            continue;
        }

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(ParseErrorKind::MalformedHeader, line_no,
                             "expected `KEY: VALUE`, got `" + std::string(line) + "`");
        }
        const auto key = trim(line.substr(0, colon));
        const auto value = trim(line.substr(colon + 1));
        if (key == "NAME") {
            name = std::string(value);
        } else if (key == "TYPE") {
            if (value != "TSP") {
                throw ParseError(ParseErrorKind::MalformedHeader, line_no,
                                 "unsupported TYPE `" + std::string(value) + "`");
            }
        } else if (key == "DIMENSION") {
            int d = 0;
            if (!parse_number(value, d) || d < 4) {
                throw ParseError(ParseErrorKind::MalformedHeader, line_no,
                                 "DIMENSION must be an integer >= 4");
            }
            dimension = d;
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D") {
                throw ParseError(ParseErrorKind::UnsupportedWeightType, line_no,
                                 "unsupported EDGE_WEIGHT_TYPE `" + std::string(value) + "`");
            }
            weight_type = std::string(value);
        }
        // Other keys (COMMENT, DISPLAY_DATA_TYPE, ...) carry no geometry.
    }

    if (section_line == 0) {
        throw ParseError(ParseErrorKind::MalformedHeader, line_no, "missing NODE_COORD_SECTION");
    }
    if (static_cast<int>(coords.size()) != *dimension) {
        throw ParseError(ParseErrorKind::CoordinateCountMismatch, line_no,
                         "DIMENSION is " + std::to_string(*dimension) + " but " +
                             std::to_string(coords.size()) + " coordinates were read");
    }
    return Instance(std::move(name), std::move(coords), neighbor_k);
}

OptimumSidecar parse_optimum_sidecar(std::string_view text) {
    std::istringstream in{std::string(text)};
    OptimumSidecar out;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty optimum sidecar");
    if (!parse_number(trim(line), out.optimum) || out.optimum < 0) {
        throw std::invalid_argument("optimum sidecar: line 1 must be a nonnegative integer");
    }
    while (std::getline(in, line)) {
        const auto fields = split_ws(line);
        if (fields.empty()) continue;
        std::vector<Vertex> tour;
        tour.reserve(fields.size());
        for (auto f : fields) {
            Vertex id = 0;
            if (!parse_number(f, id) || id < 1) {
                throw std::invalid_argument("optimum sidecar: bad tour entry `" + std::string(f) + "`");
            }
            tour.push_back(id - 1);
        }
        out.tour = std::move(tour);
        break;
    }
    return out;
}

std::string format_optimum_sidecar(const OptimumSidecar& sidecar) {
    std::string out = std::to_string(sidecar.optimum) + "\n";
    if (sidecar.tour) {
        for (std::size_t i = 0; i < sidecar.tour->size(); ++i) {
            if (i) out += ' ';
            out += std::to_string((*sidecar.tour)[i] + 1);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::optional<std::string> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Instance load_instance(const std::filesystem::path& path, int neighbor_k) {
    const auto text = slurp(path);
    if (!text) throw std::runtime_error("cannot read " + path.string());
    Instance inst = parse_tsplib(*text, neighbor_k);

    auto sidecar_path = path;
    sidecar_path.replace_extension(".opt");
    auto sidecar_text = slurp(sidecar_path);
    if (!sidecar_text) sidecar_text = slurp(path.string() + ".opt");
    if (sidecar_text) {
        auto sidecar = parse_optimum_sidecar(*sidecar_text);
        inst.set_optimum(sidecar.optimum, std::move(sidecar.tour));
    }
    return inst;
}

Instance generate_rue(int n, int side, std::uint64_t seed, int neighbor_k) {
    if (n < 4) throw std::invalid_argument("generate_rue: n must be >= 4");
    if (side < 1) throw std::invalid_argument("generate_rue: side must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, static_cast<double>(side));
    std::vector<Point> coords(n);
    for (auto& p : coords) {
        p.x = coord(rng);
        p.y = coord(rng);
    }
    return Instance("rue" + std::to_string(n) + "_s" + std::to_string(seed), std::move(coords),
                    neighbor_k);
}

std::string to_tsplib(const Instance& inst) {
    std::ostringstream out;
    out.precision(17);
    out << "NAME: " << inst.name() << "\n"
        << "TYPE: TSP\n"
        << "DIMENSION: " << inst.dimension() << "\n"
        << "EDGE_WEIGHT_TYPE: EUC_2D\n"
        << "NODE_COORD_SECTION\n";
    for (int i = 0; i < inst.dimension(); ++i) {
        out << (i + 1) << ' ' << inst.coords()[i].x << ' ' << inst.coords()[i].y << '\n';
    }
    out << "EOF\n";
    return out.str();
}

}  // namespace eax
