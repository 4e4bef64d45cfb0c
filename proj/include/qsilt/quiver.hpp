#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qsilt/rational.hpp"

namespace qsilt {

struct ParseError : std::runtime_error {
    ParseError(size_t line, size_t col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) +
                             ": " + msg),
          line(line),
          col(col) {}
    size_t line, col;
};

struct Arrow {
    std::string label;
    size_t src, tgt;  // vertex indices
    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// One rational combination of parallel paths, each path a sequence of arrow
/// indices composable left to right ("a.b" = traverse a, then b).
struct RelationExpr {
    struct Term {
        Rat coeff;
        std::vector<size_t> path;
        friend bool operator==(const Term&, const Term&) = default;
    };
    std::vector<Term> terms;
    friend bool operator==(const RelationExpr&, const RelationExpr&) = default;
};

struct AlgebraPresentation {
    std::vector<std::string> vertices;  // declaration order fixes all indexings
    std::vector<Arrow> arrows;
    std::vector<RelationExpr> relations;

    friend bool operator==(const AlgebraPresentation&, const AlgebraPresentation&) = default;

    size_t path_src(const std::vector<size_t>& path) const { return arrows[path.front()].src; }
    size_t path_tgt(const std::vector<size_t>& path) const { return arrows[path.back()].tgt; }

    std::string path_str(const std::vector<size_t>& path) const {
        std::string s;
        for (size_t i = 0; i < path.size(); ++i) {
            if (i) s += '.';
            s += arrows[path[i]].label;
        }
        return s;
    }
};

namespace detail {

inline bool is_label_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct LineCursor {
    const std::string& s;
    size_t line;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    size_t col() const { return pos + 1; }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void expect(char c, const std::string& what) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c) throw ParseError(line, col(), "expected " + what);
        ++pos;
    }
    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string label() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && is_label_char(s[pos])) ++pos;
        if (pos == start) throw ParseError(line, col(), "expected a name");
        return s.substr(start, pos - start);
    }
    // digits[/digits]
    std::string number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ParseError(line, col(), "expected a number");
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            size_t dstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == dstart) throw ParseError(line, col(), "expected a denominator");
        }
        return s.substr(start, pos - start);
    }
};

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

inline std::string strip_comment(const std::string& line) {
    auto h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

}  // namespace detail

/// Parses the `.quiver` format:
///
///   vertices: 1 2 3 4
///   arrow a: 2 -> 3
///   relation b.a
///   relation c1.d1 - c2.d2
///
/// Paths compose left to right; coefficients default to 1; `#` starts a comment.
inline AlgebraPresentation parse_algebra(const std::string& text) {
    using detail::LineCursor;
    AlgebraPresentation p;
    std::map<std::string, size_t> vertex_index;
    std::map<std::string, size_t> arrow_index;
    bool saw_vertices = false;

    auto lines = detail::split_lines(text);
    for (size_t li = 0; li < lines.size(); ++li) {
        std::string raw = detail::strip_comment(lines[li]);
        LineCursor c{raw, li + 1};
        if (c.done()) continue;
        std::string kw = c.label();

        if (kw == "vertices") {
            if (saw_vertices) throw ParseError(c.line, 1, "duplicate vertices declaration");
            c.expect(':', "':' after 'vertices'");
            while (!c.done()) {
                std::string v = c.label();
                if (vertex_index.count(v))
                    throw ParseError(c.line, c.col(), "duplicate vertex label '" + v + "'");
                vertex_index[v] = p.vertices.size();
                p.vertices.push_back(v);
            }
            if (p.vertices.empty()) throw ParseError(c.line, c.col(), "no vertices declared");
            saw_vertices = true;
        } else if (kw == "arrow") {
            if (!saw_vertices) throw ParseError(c.line, 1, "vertices must be declared first");
            std::string name = c.label();
            if (vertex_index.count(name) || arrow_index.count(name))
                throw ParseError(c.line, c.col(), "duplicate label '" + name + "'");
            c.expect(':', "':' after arrow name");
            std::string sv = c.label();
            c.expect('-', "'->'");
            c.expect('>', "'->'");
            std::string tv = c.label();
            if (!vertex_index.count(sv))
                throw ParseError(c.line, c.col(), "unknown vertex '" + sv + "'");
            if (!vertex_index.count(tv))
                throw ParseError(c.line, c.col(), "unknown vertex '" + tv + "'");
            if (!c.done()) throw ParseError(c.line, c.col(), "trailing input after arrow");
            arrow_index[name] = p.arrows.size();
            p.arrows.push_back({name, vertex_index[sv], vertex_index[tv]});
        } else if (kw == "relation") {
            if (!saw_vertices) throw ParseError(c.line, 1, "vertices must be declared first");
            RelationExpr rel;
            bool first = true;
            while (true) {
                Rat sign(1);
                if (first) {
                    if (c.consume('-')) sign = Rat(-1);
                } else {
                    if (c.done()) break;
                    if (c.consume('+'))
                        sign = Rat(1);
                    else if (c.consume('-'))
                        sign = Rat(-1);
                    else
                        throw ParseError(c.line, c.col(), "expected '+' or '-' between terms");
                }
                first = false;
                // optional rational coefficient followed by '*'
                Rat coeff(1);
                c.skip_ws();
                if (c.pos < raw.size() && std::isdigit(static_cast<unsigned char>(raw[c.pos]))) {
                    size_t save = c.pos;
                    std::string numtext = c.number();
                    if (c.consume('*')) {
                        coeff = Rat::from_string(numtext);
                    } else {
                        c.pos = save;  // a label starting with a digit
                    }
                }
                size_t term_col = c.col();
                std::vector<size_t> path;
                while (true) {
                    std::string a = c.label();
                    auto it = arrow_index.find(a);
                    if (it == arrow_index.end())
                        throw ParseError(c.line, c.col(), "unknown arrow '" + a + "'");
                    path.push_back(it->second);
                    if (!c.consume('.')) break;
                }
                if (path.size() < 2)
                    throw ParseError(c.line, term_col, "relation path must have length >= 2");
                for (size_t i = 0; i + 1 < path.size(); ++i)
                    if (p.arrows[path[i]].tgt != p.arrows[path[i + 1]].src)
                        throw ParseError(c.line, term_col,
                                         "path is not composable: '" + p.path_str(path) + "'");
                Rat cf = sign * coeff;
                if (cf.is_zero()) throw ParseError(c.line, term_col, "zero coefficient");
                for (const auto& t : rel.terms)
                    if (t.path == path)
                        throw ParseError(c.line, term_col,
                                         "duplicate path '" + p.path_str(path) + "' in relation");
                rel.terms.push_back({cf, path});
            }
            if (rel.terms.empty()) throw ParseError(c.line, c.col(), "empty relation");
            size_t s0 = p.path_src(rel.terms[0].path), t0 = p.path_tgt(rel.terms[0].path);
            for (const auto& t : rel.terms)
                if (p.path_src(t.path) != s0 || p.path_tgt(t.path) != t0)
                    throw ParseError(c.line, 1, "relation terms have mismatched endpoints");
            p.relations.push_back(std::move(rel));
        } else {
            throw ParseError(li + 1, 1, "unknown directive '" + kw + "'");
        }
    }
    if (!saw_vertices) throw ParseError(lines.size(), 1, "missing vertices declaration");
    return p;
}

/// Normative rendering: parse(render(p)) is structurally equal to p.
inline std::string render_presentation(const AlgebraPresentation& p) {
    std::ostringstream os;
    os << "vertices:";
    for (const auto& v : p.vertices) os << ' ' << v;
    os << '\n';
    for (const auto& a : p.arrows)
        os << "arrow " << a.label << ": " << p.vertices[a.src] << " -> " << p.vertices[a.tgt]
           << '\n';
    for (const auto& rel : p.relations) {
        os << "relation ";
        for (size_t i = 0; i < rel.terms.size(); ++i) {
            const auto& t = rel.terms[i];
            Rat c = t.coeff;
            if (i == 0) {
                if (c.sign() < 0) {
                    os << '-';
                    c = -c;
                }
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
                if (c.sign() < 0) c = -c;
            }
            if (!c.is_one()) os << c.str() << '*';
            os << p.path_str(t.path);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace qsilt
