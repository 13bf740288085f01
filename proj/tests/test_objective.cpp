#include "doctest.h"
#include "support.hpp"

#include "localgcl/errors.hpp"
#include "localgcl/objective.hpp"

#include <cmath>

using namespace localgcl;
using namespace localgcl::ad;
using namespace testsupport;

namespace {

double ntx(const Matrix& z, const Matrix& zh, ContrastiveConfig cfg = {}) {
    GradContext ctx;
    return nt_xent(ctx.constant(z), ctx.constant(zh), cfg).scalar();
}

ContrastiveConfig tau(double t) {
    ContrastiveConfig c;
    c.tau = t;
    return c;
}

GraphBatch batch_of_sizes(std::initializer_list<int> sizes, int d) {
    std::vector<Graph> gs;
    for (int n : sizes) gs.push_back(Graph::from_edges(n, {}, Matrix::Zero(n, d)));
    return batch(gs);
}

}  // namespace

TEST_CASE("cosine similarity") {
    const std::vector<double> v{1, 2}, w{2, 4}, e1{1, 0}, e2{0, 1}, zero{0, 0};
    CHECK(cosine_sim(v, v) == doctest::Approx(1.0));
    CHECK(cosine_sim(v, w) == doctest::Approx(1.0));
    CHECK(cosine_sim(e1, e2) == 0.0);
    CHECK(cosine_sim(zero, v) == 0.0);
}

TEST_CASE("nt_xent hand-derived values") {
    const Matrix same = make_matrix({{1, 0}, {1, 0}});
    CHECK(std::abs(ntx(same, same, tau(1.0)) - 2.0 * std::log(2.0)) < 1e-6);
    const Matrix eye = make_matrix({{1, 0}, {0, 1}});
    CHECK(std::abs(ntx(eye, eye, tau(1.0)) - 2.0 * std::log(1.0 + std::exp(-1.0))) < 1e-6);
    CHECK(std::abs(ntx(eye, eye, tau(1.0)) - 0.626524) < 1e-6);
}

TEST_CASE("nt_xent uniform case equals N log N") {
    const Matrix z = Matrix::Ones(5, 3);
    CHECK(ntx(z, z) == doctest::Approx(5.0 * std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("literal denominator drops the positive") {
    ContrastiveConfig c = tau(1.0);
    c.include_positive_in_denominator = false;
    // Orthogonal pair: -log(e / e^0) per row.
    const Matrix eye = make_matrix({{1, 0}, {0, 1}});
    CHECK(ntx(eye, eye, c) == doctest::Approx(-2.0));
}

TEST_CASE("nt_xent invariances") {
    Rng rng(21);
    const Matrix z = random_matrix(6, 4, rng), zh = random_matrix(6, 4, rng);
    const double base = ntx(z, zh);
    CHECK(base >= 0.0);
    Matrix scaled = z;
    scaled.row(2) *= 3.7;
    CHECK(ntx(scaled, zh) == doctest::Approx(base).epsilon(1e-12));
    const auto perm = random_permutation(6, rng);
    Matrix pz(6, 4), pzh(6, 4);
    for (int i = 0; i < 6; ++i) {
        pz.row(perm[static_cast<std::size_t>(i)]) = z.row(i);
        pzh.row(perm[static_cast<std::size_t>(i)]) = zh.row(i);
    }
    CHECK(ntx(pz, pzh) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("nt_xent needs negatives and matching shapes") {
    CHECK_THROWS_AS(ntx(Matrix::Ones(1, 2), Matrix::Ones(1, 2)), NeedsNegatives);
    CHECK_THROWS_AS(ntx(Matrix::Ones(2, 2), Matrix::Ones(3, 2)), ShapeError);
}

TEST_CASE("nt_xent is stable for tiny temperatures") {
    Rng rng(1);
    const double v = ntx(random_matrix(4, 3, rng), random_matrix(4, 3, rng), tau(1e-3));
    CHECK(std::isfinite(v));
}

TEST_CASE("recon_mse hand cases") {
    GradContext ctx;
    const GraphBatch one = batch_of_sizes({2}, 2);
    CHECK(recon_mse(ctx.constant(Matrix::Ones(2, 2)), ctx.constant(Matrix::Ones(2, 2)), one).scalar() == 0.0);
    CHECK(recon_mse(ctx.constant(Matrix::Ones(2, 2)), ctx.constant(Matrix::Zero(2, 2)), one).scalar() == 4.0);
    const GraphBatch two = batch_of_sizes({2, 2}, 2);
    CHECK(recon_mse(ctx.constant(Matrix::Ones(4, 2)), ctx.constant(Matrix::Zero(4, 2)), two).scalar() == 4.0);

    const std::vector<int> masked{1, 3};
    CHECK(recon_mse(ctx.constant(Matrix::Ones(4, 2)), ctx.constant(Matrix::Zero(4, 2)), two, masked, true).scalar() ==
          2.0);
    CHECK_THROWS_AS(recon_mse(ctx.constant(Matrix::Ones(4, 2)), ctx.constant(Matrix::Zero(4, 3)), two), ShapeError);
}

TEST_CASE("combined loss") {
    CHECK(combined_loss(2.0, 4.0, 0.0) == 2.0);
    CHECK(combined_loss(2.0, 4.0, 1.0) == 4.0);
    CHECK(combined_loss(2.0, 4.0, 0.5) == 3.0);
    CHECK_THROWS_AS(combined_loss(1.0, 1.0, 1.5), InvalidLambda);
    CHECK_THROWS_AS(combined_loss(1.0, 1.0, -0.1), InvalidLambda);
    GradContext ctx;
    const DiffArray a = ctx.constant(make_matrix({{2}}));
    const DiffArray b = ctx.constant(make_matrix({{4}}));
    CHECK(combined_loss(a, b, 0.0).scalar() == 2.0);
    CHECK(combined_loss(a, b, 1.0).scalar() == 4.0);
}

TEST_CASE("lambda schedules") {
    const auto inc = LambdaSchedule::incremental(0.1, 0.9);
    CHECK(lambda_at(inc, 0, 100) == 0.1);
    CHECK(lambda_at(inc, 99, 100) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(lambda_at(inc, 50, 101) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lambda_at(inc, 0, 1) == 0.1);
    const auto dec = LambdaSchedule::decremental(0.9, 0.1);
    CHECK(lambda_at(dec, 0, 11) == 0.9);
    CHECK(lambda_at(dec, 10, 11) == doctest::Approx(0.1));
    CHECK(lambda_at(LambdaSchedule::constant(0.3), 7, 10) == 0.3);

    CHECK_THROWS_AS(LambdaSchedule::incremental(0.9, 0.1).validate(), InvalidLambda);
    CHECK_THROWS_AS(LambdaSchedule::decremental(0.1, 0.9).validate(), InvalidLambda);
    CHECK_THROWS_AS(LambdaSchedule::constant(1.2).validate(), InvalidLambda);
    CHECK_THROWS_AS(lambda_at(inc, 100, 100), ConfigError);
    CHECK(parse_lambda_kind(to_string(LambdaSchedule::Kind::Decremental)) == LambdaSchedule::Kind::Decremental);
}

TEST_CASE("loss gradients match finite differences") {
    const GraphBatch b = batch_of_sizes({2, 3, 1}, 3);
    const std::vector<int> masked{0, 3, 5};
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CAPTURE(seed);
        Rng rng(seed);
        const Matrix z = random_matrix(5, 4, rng), zh = random_matrix(5, 4, rng);
        CHECK(gradient_error([](auto&, auto& in) { return nt_xent(in[0], in[1], tau(0.5)); }, {z, zh}) <= 1e-4);
        ContrastiveConfig literal = tau(0.7);
        literal.include_positive_in_denominator = false;
        CHECK(gradient_error([&](auto&, auto& in) { return nt_xent(in[0], in[1], literal); }, {z, zh}) <= 1e-4);

        const Matrix x = random_matrix(6, 3, rng), xr = random_matrix(6, 3, rng);
        CHECK(gradient_error([&](auto& c, auto& in) { return recon_mse(c.constant(x), in[0], b); }, {xr}) <= 1e-4);
        CHECK(gradient_error([&](auto& c, auto& in) { return recon_mse(c.constant(x), in[0], b, masked, true); },
                             {xr}) <= 1e-4);
        CHECK(gradient_error(
                  [&](auto& c, auto& in) {
                      return combined_loss(nt_xent(in[0], in[1], tau(0.5)), recon_mse(c.constant(x), in[2], b), 0.3);
                  },
                  {z, zh, xr}) <= 1e-4);
    }
}
