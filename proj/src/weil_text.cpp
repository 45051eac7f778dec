#include "weilkit/weil_text.hpp"

#include <cctype>
#include <sstream>

namespace weilkit {

namespace {

class Cursor {
public:
    explicit Cursor(const std::string &s) : s_(s) {}

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= s_.size();
    }
    bool accept(char c) {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }
    bool accept_word(const std::string &w) {
        skip_space();
        if (s_.compare(pos_, w.size(), w) == 0) {
            std::size_t end = pos_ + w.size();
            if (end == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[end]))) {
                pos_ = end;
                return true;
            }
        }
        return false;
    }
    std::string identifier() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
        }
        if (start == pos_)
            fail("expected a generator name");
        return s_.substr(start, pos_ - start);
    }
    unsigned integer() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected an exponent");
        return static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
    }
    [[noreturn]] void fail(const std::string &msg) const {
        std::string near = pos_ < s_.size() ? "'" + s_.substr(pos_, 12) + "'" : "end of input";
        throw ParseError(msg + " at " + near + " in \"" + s_ + "\"");
    }

private:
    const std::string &s_;
    std::size_t pos_ = 0;
};

} // namespace

WeilAlgebra parse_presentation(const std::string &text) {
    Cursor cur(text);
    cur.accept_word("weil");
    if (!cur.accept('Q'))
        cur.fail("expected 'Q[' to open a presentation");
    cur.expect('[');
    std::vector<std::string> gens;
    if (!cur.accept(']')) {
        do {
            gens.push_back(cur.identifier());
        } while (cur.accept(','));
        cur.expect(']');
    }
    cur.expect('/');
    cur.expect('(');
    std::vector<Exponents> rels;
    if (!cur.accept(')')) {
        do {
            Exponents e(gens.size(), 0);
            do {
                std::string name = cur.identifier();
                std::size_t g = 0;
                while (g < gens.size() && gens[g] != name)
                    ++g;
                if (g == gens.size())
                    throw ParseError("unknown generator '" + name + "' in relation");
                unsigned power = cur.accept('^') ? cur.integer() : 1;
                e[g] += power;
            } while (cur.accept('*'));
            rels.push_back(std::move(e));
        } while (cur.accept(','));
        cur.expect(')');
    }
    if (!cur.at_end())
        cur.fail("unexpected trailing text");
    return WeilAlgebra::presented(std::move(gens), std::move(rels));
}

std::string serialize_presentation(const WeilAlgebra &w) {
    if (!w.is_presented())
        throw WeilError("serialize_presentation needs a presented algebra");
    return "weil " + WeilAlgebra::presented(w.generators(), w.relations()).describe();
}

WeilAlgebra parse_tabled(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&](std::string &out) {
        while (std::getline(in, out)) {
            auto first = out.find_first_not_of(" \t\r");
            if (first != std::string::npos)
                return true;
        }
        return false;
    };
    if (!next_line(line) || line.find("weil") == std::string::npos ||
        line.find("tabled") == std::string::npos)
        throw ParseError("tabled algebra must start with 'weil tabled'");
    TabledData data;
    bool have_dim = false, have_aug = false, ended = false;
    while (next_line(line)) {
        std::istringstream words(line);
        std::string key;
        words >> key;
        if (key == "end") {
            ended = true;
            break;
        }
        if (key == "dim") {
            if (!(words >> data.dimension))
                throw ParseError("bad 'dim' line: " + line);
            have_dim = true;
        } else if (key == "unit") {
            if (!(words >> data.unit_index))
                throw ParseError("bad 'unit' line: " + line);
        } else if (key == "augmentation") {
            std::string tok;
            while (words >> tok) {
                try {
                    data.augmentation.push_back(parse_rational(tok));
                } catch (const std::invalid_argument &e) {
                    throw ParseError(e.what());
                }
            }
            have_aug = true;
        } else if (key == "c") {
            StructureConstant c;
            std::string value;
            if (!(words >> c.i >> c.j >> c.k >> value))
                throw ParseError("bad structure constant line: " + line);
            try {
                c.value = parse_rational(value);
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what());
            }
            data.constants.push_back(std::move(c));
        } else {
            throw ParseError("unknown directive '" + key + "' in tabled algebra");
        }
        std::string extra;
        if (key != "augmentation" && (words >> extra))
            throw ParseError("trailing token '" + extra + "' in line: " + line);
    }
    if (!ended)
        throw ParseError("tabled algebra is missing 'end'");
    if (!have_dim || !have_aug)
        throw ParseError("tabled algebra needs 'dim' and 'augmentation' lines");
    return WeilAlgebra::tabled(data);
}

std::string serialize_tabled(const WeilAlgebra &w) {
    std::ostringstream os;
    const std::size_t n = w.dimension();
    os << "weil tabled\n";
    os << "dim " << n << "\n";
    os << "unit 0\n";
    os << "augmentation";
    for (const auto &a : w.augmentation())
        os << " " << a.get_str();
    os << "\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto &e : w.product(i, j))
                os << "c " << i << " " << j << " " << e.index << " " << e.coeff.get_str() << "\n";
    os << "end\n";
    return os.str();
}

WeilAlgebra parse_algebra(const std::string &text) {
    std::istringstream in(text);
    std::string first, second;
    in >> first >> second;
    if (first == "weil" && second == "tabled")
        return parse_tabled(text);
    return parse_presentation(text);
}

std::string serialize_algebra(const WeilAlgebra &w) {
    return w.is_presented() ? serialize_presentation(w) : serialize_tabled(w);
}

} // namespace weilkit
