#pragma once

// Shared helpers for the test binaries: subprocess driver for the CLI,
// finite-difference jet oracles, rotated-field composition, small RNG
// utilities. Header-only, test-side code.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "levelband/field.hpp"

namespace testsupport {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'')
            q += "'\\''";
        else
            q += c;
    }
    q += "'";
    return q;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline CliResult run_cli(const std::vector<std::string>& args) {
    static int counter = 0;
    const std::string base =
        "/tmp/levelband_t" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
    std::string cmd = shell_quote(LEVELBAND_CLI_PATH);
    for (const std::string& a : args) cmd += " " + shell_quote(a);
    cmd += " > " + base + ".out 2> " + base + ".err";
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(base + ".out");
    r.err = slurp(base + ".err");
    std::remove((base + ".out").c_str());
    std::remove((base + ".err").c_str());
    return r;
}

// Central-difference jet: gradient with step hg, Hessian with step hh.
template <typename F>
levelband::Jet2 fd_jet(F&& f, double x, double y, double hg, double hh) {
    levelband::Jet2 j;
    j.value = f(x, y);
    j.grad.x = (f(x + hg, y) - f(x - hg, y)) / (2.0 * hg);
    j.grad.y = (f(x, y + hg) - f(x, y - hg)) / (2.0 * hg);
    j.hess.xx = (f(x + hh, y) - 2.0 * j.value + f(x - hh, y)) / (hh * hh);
    j.hess.yy = (f(x, y + hh) - 2.0 * j.value + f(x, y - hh)) / (hh * hh);
    j.hess.xy = (f(x + hh, y + hh) - f(x + hh, y - hh) - f(x - hh, y + hh) +
                 f(x - hh, y - hh)) /
                (4.0 * hh * hh);
    return j;
}

// g(p) = f(R p) with R the rotation by angle; jets composed exactly:
// grad g = R^T (grad f)(Rp), hess g = R^T H R.
class RotatedField : public levelband::ScalarField {
public:
    RotatedField(levelband::FieldPtr base, double angle)
        : base_(std::move(base)), c_(std::cos(angle)), s_(std::sin(angle)),
          window_(base_->window()) {}

    levelband::Jet2 jet(const levelband::Point2& p) const override {
        const levelband::Point2 q{c_ * p.x - s_ * p.y, s_ * p.x + c_ * p.y};
        const levelband::Jet2 j = base_->jet(q);
        levelband::Jet2 out;
        out.value = j.value;
        out.grad = {c_ * j.grad.x + s_ * j.grad.y, -s_ * j.grad.x + c_ * j.grad.y};
        // R^T H R written out for the symmetric storage.
        const double hxx = j.hess.xx, hxy = j.hess.xy, hyy = j.hess.yy;
        const double a = c_ * hxx + s_ * hxy;
        const double b = c_ * hxy + s_ * hyy;
        const double d = -s_ * hxx + c_ * hxy;
        const double e = -s_ * hxy + c_ * hyy;
        out.hess.xx = a * c_ + b * s_;
        out.hess.xy = -a * s_ + b * c_;
        out.hess.yy = -d * s_ + e * c_;
        return out;
    }
    const levelband::Window& window() const override { return window_; }
    std::string description() const override { return "rotated:" + base_->description(); }

    levelband::Point2 forward(const levelband::Point2& p) const {
        return {c_ * p.x - s_ * p.y, s_ * p.x + c_ * p.y};
    }

private:
    levelband::FieldPtr base_;
    double c_, s_;
    levelband::Window window_;
};

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace testsupport
