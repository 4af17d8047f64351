#include "wqmc/weights.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace wqmc {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("weights: bad number '" + s + "'");
    }
    if (pos != s.size())
        throw std::invalid_argument("weights: bad number '" + s + "'");
    return v;
}

// Parse "key=value, key=value" into the two recognized keys.
void parse_kv(const std::string& body, const std::string& main_key,
              double& main_val, bool& have_main, double& scale) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("weights: expected key=value in '" + item + "'");
        std::string key = strip(item.substr(0, eq));
        double val = parse_number(strip(item.substr(eq + 1)));
        if (key == main_key) {
            main_val = val;
            have_main = true;
        } else if (key == "scale") {
            scale = val;
        } else {
            throw std::invalid_argument("weights: unknown key '" + key + "'");
        }
    }
}

}  // namespace

void WeightSequence::check() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("weights: ") + what +
                                                    " must be positive");
    };
    positive(scale_, "scale");
    if (kind_ == Kind::Geom && !(q_ > 0.0 && q_ < 1.0))
        throw std::invalid_argument("weights: geometric ratio must be in (0,1)");
    if (kind_ == Kind::Poly && !(p_ > 0.0))
        throw std::invalid_argument("weights: polynomial exponent must be positive");
    if (kind_ == Kind::Explicit) {
        if (head_.empty()) throw std::invalid_argument("weights: empty explicit list");
        for (std::size_t i = 0; i < head_.size(); ++i) {
            positive(head_[i], "list entry");
            if (i > 0 && head_[i] > head_[i - 1] + 1e-15)
                throw std::invalid_argument("weights: list entries must be nonincreasing");
        }
    }
    // Nonincreasing across the head/tail seam and beyond.
    double prev = weight(1);
    for (int j = 2; j < static_cast<int>(head_.size()) + 4; ++j) {
        double w = weight(j);
        if (w > prev + 1e-15)
            throw std::invalid_argument("weights: sequence must be nonincreasing");
        prev = w;
    }
}

WeightSequence WeightSequence::poly(double p, double scale) {
    WeightSequence w;
    w.kind_ = Kind::Poly;
    w.p_ = p;
    w.scale_ = scale;
    w.check();
    return w;
}

WeightSequence WeightSequence::geometric(double q, double scale) {
    WeightSequence w;
    w.kind_ = Kind::Geom;
    w.q_ = q;
    w.scale_ = scale;
    w.check();
    return w;
}

WeightSequence WeightSequence::explicit_list(std::vector<double> head,
                                             WeightSequence tail) {
    if (tail.kind_ == Kind::Explicit)
        throw std::invalid_argument("weights: tail rule cannot be a list");
    WeightSequence w;
    w.kind_ = Kind::Explicit;
    w.head_ = std::move(head);
    w.tail_kind_ = tail.kind_;
    w.tail_p_ = tail.p_;
    w.tail_q_ = tail.q_;
    w.tail_scale_ = tail.scale_;
    w.check();
    return w;
}

WeightSequence WeightSequence::parse(const std::string& text) {
    std::string t = strip(text);
    auto paren = t.find('(');
    if (paren == std::string::npos || t.back() != ')')
        throw std::invalid_argument("weights: expected form name(...): '" + text + "'");
    std::string name = strip(t.substr(0, paren));
    std::string body = t.substr(paren + 1, t.size() - paren - 2);

    if (name == "poly") {
        double p = 0.0, scale = 1.0;
        bool have = false;
        parse_kv(body, "p", p, have, scale);
        if (!have) throw std::invalid_argument("weights: poly needs p=");
        return poly(p, scale);
    }
    if (name == "geom") {
        double q = 0.0, scale = 1.0;
        bool have = false;
        parse_kv(body, "q", q, have, scale);
        if (!have) throw std::invalid_argument("weights: geom needs q=");
        return geometric(q, scale);
    }
    if (name == "list") {
        auto semi = body.find(';');
        if (semi == std::string::npos)
            throw std::invalid_argument("weights: list needs '; tail=...'");
        std::string values = body.substr(0, semi);
        std::string tail_part = strip(body.substr(semi + 1));
        if (tail_part.rfind("tail=", 0) != 0)
            throw std::invalid_argument("weights: list needs 'tail=' after ';'");
        WeightSequence tail = parse(tail_part.substr(5));
        std::vector<double> head;
        std::stringstream ss(values);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = strip(item);
            if (!item.empty()) head.push_back(parse_number(item));
        }
        return explicit_list(std::move(head), tail);
    }
    throw std::invalid_argument("weights: unknown form '" + name + "'");
}

std::string WeightSequence::to_config_string() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind_) {
        case Kind::Poly: os << "poly(p=" << p_ << ", scale=" << scale_ << ")"; break;
        case Kind::Geom: os << "geom(q=" << q_ << ", scale=" << scale_ << ")"; break;
        case Kind::Explicit: {
            os << "list(";
            for (std::size_t i = 0; i < head_.size(); ++i) {
                if (i) os << ",";
                os << head_[i];
            }
            os << "; tail=";
            if (tail_kind_ == Kind::Poly)
                os << "poly(p=" << tail_p_ << ", scale=" << tail_scale_ << ")";
            else
                os << "geom(q=" << tail_q_ << ", scale=" << tail_scale_ << ")";
            os << ")";
            break;
        }
    }
    return os.str();
}

double WeightSequence::weight(int j) const {
    if (j < 1) throw std::invalid_argument("weights: index is 1-based");
    double x = static_cast<double>(j);
    switch (kind_) {
        case Kind::Poly: return scale_ * std::pow(x, -p_);
        case Kind::Geom: return scale_ * std::pow(q_, x);
        case Kind::Explicit:
            if (j <= static_cast<int>(head_.size()))
                return head_[static_cast<std::size_t>(j - 1)];
            if (tail_kind_ == Kind::Poly) return tail_scale_ * std::pow(x, -tail_p_);
            return tail_scale_ * std::pow(tail_q_, x);
    }
    return 0.0;
}

double WeightSequence::set_weight(std::span<const int> u) const {
    double g = 1.0;
    int prev = 0;
    for (int j : u) {
        if (j <= prev)
            throw std::invalid_argument("weights: subsets must be strictly increasing");
        prev = j;
        g *= weight(j);
    }
    return g;
}

double WeightSequence::decay() const {
    switch (kind_) {
        case Kind::Poly: return p_;
        case Kind::Geom: return std::numeric_limits<double>::infinity();
        case Kind::Explicit:
            return tail_kind_ == Kind::Poly ? tail_p_
                                            : std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

bool WeightSequence::summable() const {
    double d = decay();
    return d > 1.0;  // geometric decay reports +inf
}

WeightSequence WeightSequence::scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("weights: scale must be positive");
    WeightSequence w = *this;
    w.scale_ *= c;
    w.tail_scale_ *= c;
    for (auto& h : w.head_) h *= c;
    return w;
}

double WeightSequence::embedding_budget(int s, double tol) const {
    if (s >= 0) {
        double log_prod = 0.0;
        for (int j = 1; j <= s; ++j) log_prod += std::log1p(weight(j));
        return std::exp(0.5 * log_prod);
    }
    if (!summable()) return std::numeric_limits<double>::infinity();
    double log_prod = 0.0;
    int j = 1;
    for (;; ++j) {
        double w = weight(j);
        log_prod += std::log1p(w);
        // Remaining log mass is below sum_{i>j} gamma_i; bound it by the
        // integral/geometric tail of the rule.
        double tail_bound;
        if (decay() == std::numeric_limits<double>::infinity()) {
            double q = kind_ == Kind::Geom ? q_ : tail_q_;
            tail_bound = w * q / (1.0 - q);
        } else {
            double p = decay();
            tail_bound = w * static_cast<double>(j) / (p - 1.0);
        }
        if (tail_bound < tol || j > 100000000) break;
    }
    return std::exp(0.5 * log_prod);
}

}  // namespace wqmc
