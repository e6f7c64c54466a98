#include <gtest/gtest.h>

#include <random>

#include "foliated/scalar.hpp"

using namespace foliated;

namespace {

Field f23(2, 3);

Scalar s(const std::string& t, const Field& f = f23) { return parse_scalar(t, f); }

Scalar random_scalar(std::mt19937_64& rng, const Field& f) {
    std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
    Scalar x;
    for (int slot = 0; slot < 8; ++slot) {
        if (((slot & 2) && !f.d1) || ((slot & 4) && !f.d2)) continue;
        if (rng() % 2) continue;
        x += Scalar(num(rng), den(rng)) * Scalar::basis(slot, f);
    }
    return x;
}

}  // namespace

TEST(Scalar, KnownInverses) {
    EXPECT_EQ(s("1+sqrt2").inverse(), s("sqrt2-1"));
    EXPECT_EQ(s("1+i").inverse(), s("1/2-1/2*i"));
    EXPECT_EQ(s("sqrt2+sqrt3").inverse(), s("sqrt3-sqrt2"));
    EXPECT_EQ(s("2").inverse(), s("1/2"));
}

TEST(Scalar, BasisRelations) {
    EXPECT_EQ(s("i*i"), s("-1"));
    EXPECT_EQ(s("sqrt2*sqrt2"), s("2"));
    EXPECT_EQ(s("sqrt2*sqrt3"), s("sqrt6"));
    EXPECT_EQ(s("sqrt8"), s("2*sqrt2"));
    EXPECT_EQ(s("sqrt24"), s("2*sqrt2*sqrt3"));
}

TEST(Scalar, InverseRoundTripRandom) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 300; ++k) {
        Scalar x = random_scalar(rng, f23);
        if (x.is_zero()) continue;
        Scalar one = x * x.inverse();
        ASSERT_EQ(one, Scalar(1)) << x.to_string();
    }
}

TEST(Scalar, FieldAxiomsRandom) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        Scalar a = random_scalar(rng, f23), b = random_scalar(rng, f23), c = random_scalar(rng, f23);
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * b, b * a);
        ASSERT_TRUE((a - a).is_zero());
    }
}

TEST(Scalar, NumericConsistency) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        Scalar a = random_scalar(rng, f23), b = random_scalar(rng, f23);
        auto p = (a * b).to_complex();
        auto q = a.to_complex() * b.to_complex();
        ASSERT_NEAR(p.real(), q.real(), 1e-9);
        ASSERT_NEAR(p.imag(), q.imag(), 1e-9);
    }
}

TEST(Scalar, StringRoundTrip) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        Scalar a = random_scalar(rng, f23);
        ASSERT_EQ(parse_scalar(a.to_string(), f23), a) << a.to_string();
    }
    EXPECT_EQ(s("sqrt2-1").to_string(), "-1+sqrt2");
    EXPECT_EQ(Scalar().to_string(), "0");
}

TEST(Scalar, ParseErrors) {
    EXPECT_THROW(parse_scalar("1+", f23), ParseError);
    EXPECT_THROW(parse_scalar("sqrt5", f23), ParseError);
    EXPECT_THROW(parse_scalar("1/0", f23), ParseError);
    EXPECT_THROW(parse_scalar("x", f23), ParseError);
}

TEST(Scalar, FieldRules) {
    EXPECT_THROW(Field(4), FieldError);
    EXPECT_THROW(Field(2, 2), FieldError);
    EXPECT_THROW(Field(1), FieldError);
    Scalar a = parse_scalar("sqrt2", Field(2));
    Scalar b = parse_scalar("sqrt3", Field(3));
    EXPECT_THROW(a * b, FieldError);
    EXPECT_EQ((a * Scalar::i()).field(), Field(2));
    EXPECT_EQ(infer_field({"1", "sqrt2-1", "sqrt8"}), Field(2));
    EXPECT_EQ(infer_field({"sqrt2", "sqrt3", "sqrt6"}), Field(2, 3));
    EXPECT_THROW(infer_field({"sqrt2", "sqrt3", "sqrt5"}), FieldError);
}

TEST(Scalar, DivisionByZeroThrows) { EXPECT_THROW(Scalar().inverse(), std::domain_error); }
