#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrfit/problem.hpp"
#include "corrfit/types.hpp"

namespace corrfit {

namespace detail {

inline Matrix make(std::initializer_list<std::initializer_list<double>> rows) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = static_cast<Index>(rows.begin()->size());
    Matrix m(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

/// Embedded data for the two bundled example problems: target matrices,
/// the starting angles used in the reference runs, and the solutions those
/// runs reached (regression baselines for the acceptance suite).
struct FixtureData {
    // clang-format off
    const Matrix example31_target = make({
        { 1.0000,  0.1849, -0.2867, -0.2997},
        { 0.1849,  1.0000,  0.2851,  0.2582},
        {-0.2867,  0.2851,  1.0000, -0.3100},
        {-0.2997,  0.2582, -0.3100,  1.0000}
    });

    const Matrix example31_start_k3 = make({
        { 0.0344,  0.7952},
        { 0.4387,  0.1869},
        { 0.3816,  0.4898},
        { 0.7655,  0.4456}
    });

    const Matrix example31_angles_k3 = make({
        {-1.6439,  1.3217},
        { 1.2743, -0.5270},
        { 0.3266,  0.8184},
        { 2.2501,  0.3043}
    });

    const Matrix example31_solution_k3 = make({
        { 1.0000,  0.2403, -0.3495, -0.3619},
        { 0.2403,  1.0000,  0.3453,  0.3179},
        {-0.3495,  0.3453,  1.0000, -0.3777},
        {-0.3619,  0.3179, -0.3777,  1.0000}
    });

    const Matrix example31_start_k2 = make({
        { 0.9572},
        { 0.4854},
        { 0.8003},
        { 0.1419}
    });

    const Matrix example31_angles_k2 = make({
        { 2.2975},
        { 0.4993},
        { 0.6773},
        {-1.0893}
    });

    const Matrix example31_solution_k2 = make({
        { 1.0000, -0.2254, -0.0494, -0.9701},
        {-0.2254,  1.0000,  0.9842, -0.0178},
        {-0.0494,  0.9842,  1.0000, -0.1946},
        {-0.9701, -0.0178, -0.1946,  1.0000}
    });

    const Matrix example32_target1 = make({
        { 1.0000,  0.6712,  0.5141,  0.7085,  0.9411,  0.9435,  0.9619,  0.8106,  0.5186, -0.0071,  0.9514},
        { 0.6712,  1.0000,  0.7421,  0.7707,  0.5058,  0.5926,  0.6942,  0.7540,  0.7738,  0.5590,  0.6122},
        { 0.5141,  0.7421,  1.0000,  0.4919,  0.3912,  0.3549,  0.4227,  0.4881,  0.6179,  0.4515,  0.3700},
        { 0.7085,  0.7707,  0.4919,  1.0000,  0.5708,  0.7849,  0.7084,  0.6832,  0.4142,  0.1868,  0.7442},
        { 0.9411,  0.5058,  0.3912,  0.5708,  1.0000,  0.8967,  0.9175,  0.6512,  0.3372, -0.2023,  0.9251},
        { 0.9435,  0.5926,  0.3549,  0.7849,  0.8967,  1.0000,  0.9316,  0.7522,  0.3542, -0.1386,  0.9618},
        { 0.9619,  0.6942,  0.4227,  0.7084,  0.9175,  0.9316,  1.0000,  0.8441,  0.5710,  0.0352,  0.9483},
        { 0.8106,  0.7540,  0.4881,  0.6832,  0.6512,  0.7522,  0.8441,  1.0000,  0.8176,  0.3378,  0.7849},
        { 0.5186,  0.7738,  0.6179,  0.4142,  0.3372,  0.3542,  0.5710,  0.8176,  1.0000,  0.6533,  0.4024},
        {-0.0071,  0.5590,  0.4515,  0.1868, -0.2023, -0.1386,  0.0352,  0.3378,  0.6533,  1.0000, -0.0495},
        { 0.9514,  0.6122,  0.3700,  0.7442,  0.9251,  0.9618,  0.9483,  0.7849,  0.4024, -0.0495,  1.0000}
    });

    const Matrix example32_target2 = make({
        { 1.0000,  0.8140,  0.9019,  0.8838,  0.4088,  0.9100,  0.2976,  0.5686,  0.2685,  0.6239,  0.3775},
        { 0.8140,  1.0000,  0.9564,  0.9502,  0.5080,  0.8474,  0.3311,  0.3952,  0.1728,  0.8082,  0.4650},
        { 0.9019,  0.9564,  1.0000,  0.9586,  0.5407,  0.9202,  0.2926,  0.4808,  0.1827,  0.8114,  0.5034},
        { 0.8838,  0.9502,  0.9586,  1.0000,  0.4479,  0.8992,  0.4163,  0.5251,  0.2953,  0.7441,  0.4152},
        { 0.4088,  0.5080,  0.5407,  0.4479,  1.0000,  0.4441, -0.3338, -0.1371, -0.3909,  0.7998,  0.9451},
        { 0.9100,  0.8474,  0.9202,  0.8992,  0.4441,  1.0000,  0.3586,  0.5868,  0.2569,  0.7422,  0.4388},
        { 0.2976,  0.3311,  0.2926,  0.4163, -0.3338,  0.3586,  1.0000,  0.8315,  0.9211,  0.0386, -0.3588},
        { 0.5686,  0.3952,  0.4808,  0.5251, -0.1371,  0.5868,  0.8315,  1.0000,  0.8911,  0.2210, -0.1591},
        { 0.2685,  0.1728,  0.1827,  0.2953, -0.3909,  0.2569,  0.9211,  0.8911,  1.0000, -0.0558, -0.4198},
        { 0.6239,  0.8082,  0.8114,  0.7441,  0.7998,  0.7422,  0.0386,  0.2210, -0.0558,  1.0000,  0.7942},
        { 0.3775,  0.4650,  0.5034,  0.4152,  0.9451,  0.4388, -0.3588, -0.1591, -0.4198,  0.7942,  1.0000}
    });

    const Matrix example32_target3 = make({
        { 1.0000,  0.8581,  0.8033,  0.7763,  0.5692,  0.8994, -0.0383, -0.1388, -0.2484,  0.7421,  0.5445},
        { 0.8581,  1.0000,  0.8446,  0.7744,  0.4408,  0.8166,  0.1116, -0.1725, -0.1207,  0.5586,  0.3944},
        { 0.8033,  0.8446,  1.0000,  0.8788,  0.2731,  0.8565,  0.2448, -0.0567,  0.1683,  0.4772,  0.2438},
        { 0.7763,  0.7744,  0.8788,  1.0000,  0.3428,  0.8868,  0.2869,  0.0620,  0.2111,  0.4601,  0.3225},
        { 0.5692,  0.4408,  0.2731,  0.3428,  1.0000,  0.4730, -0.5636, -0.4667, -0.6824,  0.8637,  0.9721},
        { 0.8994,  0.8166,  0.8565,  0.8868,  0.4730,  1.0000,  0.1251, -0.0813, -0.0267,  0.6438,  0.4551},
        {-0.0383,  0.1116,  0.2448,  0.2869, -0.5636,  0.1251,  1.0000,  0.6858,  0.8411, -0.5392, -0.5661},
        {-0.1388, -0.1725, -0.0567,  0.0620, -0.4667, -0.0813,  0.6858,  1.0000,  0.7263, -0.4975, -0.4254},
        {-0.2484, -0.1207,  0.1683,  0.2111, -0.6824, -0.0267,  0.8411,  0.7263,  1.0000, -0.6348, -0.6618},
        { 0.7421,  0.5586,  0.4772,  0.4601,  0.8637,  0.6438, -0.5392, -0.4975, -0.6348,  1.0000,  0.8715},
        { 0.5445,  0.3944,  0.2438,  0.3225,  0.9721,  0.4551, -0.5661, -0.4254, -0.6618,  0.8715,  1.0000}
    });

    const Matrix example32_target4 = make({
        { 1.0000,  0.6803,  0.7064,  0.8565, -0.2759,  0.5470,  0.4280,  0.3874,  0.3382,  0.3684, -0.2266},
        { 0.6803,  1.0000,  0.7341,  0.7650, -0.2123,  0.7590, -0.1643, -0.1412, -0.1483, -0.0227, -0.1681},
        { 0.7064,  0.7341,  1.0000,  0.7334, -0.2411,  0.5976, -0.0299, -0.0849, -0.1307,  0.0605, -0.1856},
        { 0.8565,  0.7650,  0.7334,  1.0000, -0.2705,  0.6115,  0.2210,  0.1977,  0.1355,  0.2755, -0.1968},
        {-0.2759, -0.2123, -0.2411, -0.2705,  1.0000, -0.1890, -0.1144, -0.0014,  0.0969,  0.4612,  0.9336},
        { 0.5470,  0.7590,  0.5976,  0.6115, -0.1890,  1.0000, -0.3366, -0.2152, -0.2045, -0.2603, -0.1309},
        { 0.4280, -0.1643, -0.0299,  0.2210, -0.1144, -0.3366,  1.0000,  0.8938,  0.8434,  0.6356, -0.1117},
        { 0.3874, -0.1412, -0.0849,  0.1977, -0.0014, -0.2152,  0.8938,  1.0000,  0.9486,  0.6122,  0.0158},
        { 0.3382, -0.1483, -0.1307,  0.1355,  0.0969, -0.2045,  0.8434,  0.9486,  1.0000,  0.5966,  0.1128},
        { 0.3684, -0.0227,  0.0605,  0.2755,  0.4612, -0.2603,  0.6356,  0.6122,  0.5966,  1.0000,  0.5056},
        {-0.2266, -0.1681, -0.1856, -0.1968,  0.9336, -0.1309, -0.1117,  0.0158,  0.1128,  0.5056,  1.0000}
    });

    const Matrix example32_target5 = make({
        { 1.0000,  0.2118,  0.1238,  0.2178, -0.2533, -0.0778,  0.7000,  0.3288,  0.1310, -0.0052,  0.1428},
        { 0.2118,  1.0000,  0.8882,  0.7828,  0.6747, -0.8135,  0.3794,  0.8962,  0.8687,  0.6974,  0.4794},
        { 0.1238,  0.8882,  1.0000,  0.6828,  0.7155, -0.9202,  0.4205,  0.7974,  0.9306,  0.8604,  0.7235},
        { 0.2178,  0.7828,  0.6828,  1.0000,  0.6836, -0.5435,  0.3370,  0.6787,  0.6683,  0.3548,  0.1678},
        {-0.2533,  0.6747,  0.7155,  0.6836,  1.0000, -0.6628,  0.0448,  0.4736,  0.6978,  0.5897,  0.3092},
        {-0.0778, -0.8135, -0.9202, -0.5435, -0.6628,  1.0000, -0.4037, -0.7538, -0.8888, -0.8936, -0.7417},
        { 0.7000,  0.3794,  0.4205,  0.3370,  0.0448, -0.4037,  1.0000,  0.5818,  0.4775,  0.3655,  0.4722},
        { 0.3288,  0.8962,  0.7974,  0.6787,  0.4736, -0.7538,  0.5818,  1.0000,  0.8544,  0.6521,  0.5163},
        { 0.1310,  0.8687,  0.9306,  0.6683,  0.6978, -0.8888,  0.4775,  0.8544,  1.0000,  0.8203,  0.6500},
        {-0.0052,  0.6974,  0.8604,  0.3548,  0.5897, -0.8936,  0.3655,  0.6521,  0.8203,  1.0000,  0.8810},
        { 0.1428,  0.4794,  0.7235,  0.1678,  0.3092, -0.7417,  0.4722,  0.5163,  0.6500,  0.8810,  1.0000}
    });

    const Matrix example32_start_k3 = make({
        { 0.0462,  0.1869},
        { 0.0971,  0.4898},
        { 0.8235,  0.4456},
        { 0.6948,  0.6463},
        { 0.3171,  0.7094},
        { 0.9502,  0.7547},
        { 0.0344,  0.2760},
        { 0.4387,  0.6797},
        { 0.3816,  0.6551},
        { 0.7655,  0.1626},
        { 0.7952,  0.1190}
    });

    const Matrix example32_angles_k3 = make({
        { 0.4179,  1.2147},
        { 0.4126,  0.4239},
        { 0.3730,  0.3196},
        { 0.2868,  0.9097},
        { 1.2956, -0.3683},
        { 0.9810,  1.3296},
        {-0.7615,  0.6138},
        {-0.7709,  0.9219},
        {-0.8959,  0.9181},
        { 1.0963, -0.7234},
        { 1.2672, -0.4347}
    });

    const Matrix example32_solution_k3 = make({
        { 1.0000,  0.9517,  0.9436,  0.9861,  0.2436,  0.8434,  0.4306,  0.3849,  0.2680,  0.2879,  0.2428},
        { 0.9517,  1.0000,  0.9984,  0.9790,  0.5200,  0.7152,  0.3913,  0.4117,  0.2967,  0.5651,  0.5239},
        { 0.9436,  0.9984,  1.0000,  0.9789,  0.5240,  0.6790,  0.4334,  0.4588,  0.3468,  0.5887,  0.5318},
        { 0.9861,  0.9790,  0.9789,  1.0000,  0.3393,  0.7482,  0.5075,  0.4909,  0.3784,  0.4225,  0.3473},
        { 0.2436,  0.5200,  0.5240,  0.3393,  1.0000,  0.0498, -0.1720,  0.0093, -0.0410,  0.9268,  0.9976},
        { 0.8434,  0.7152,  0.6790,  0.7482,  0.0498,  1.0000, -0.0301, -0.1326, -0.2472, -0.0888,  0.0138},
        { 0.4306,  0.3913,  0.4334,  0.5075, -0.1720, -0.0301,  1.0000,  0.9773,  0.9662,  0.1886, -0.1121},
        { 0.3849,  0.4117,  0.4588,  0.4909,  0.0093, -0.1326,  0.9773,  1.0000,  0.9922,  0.3739,  0.0731},
        { 0.2680,  0.2967,  0.3468,  0.3784, -0.0410, -0.2472,  0.9662,  0.9922,  1.0000,  0.3345,  0.0256},
        { 0.2879,  0.5651,  0.5887,  0.4225,  0.9268, -0.0888,  0.1886,  0.3739,  0.3345,  1.0000,  0.9503},
        { 0.2428,  0.5239,  0.5318,  0.3473,  0.9976,  0.0138, -0.1121,  0.0731,  0.0256,  0.9503,  1.0000}
    });


    // clang-format on

    const std::vector<Matrix> example31_targets{example31_target};
    const std::vector<Matrix> example32_targets{example32_target1, example32_target2,
                                                example32_target3, example32_target4,
                                                example32_target5};
};

inline const FixtureData& fixture_data() {
    static const FixtureData data;
    return data;
}

} // namespace detail

inline std::vector<std::string> fixture_names() { return {"example31", "example32"}; }

namespace detail {
inline bool is_example31(std::string_view name) { return name == "example31"; }
inline bool is_example32(std::string_view name) { return name == "example32"; }
inline void check_fixture_name(std::string_view name) {
    if (!is_example31(name) && !is_example32(name))
        throw UnknownFixture("unknown fixture \"" + std::string(name) + "\"");
}
} // namespace detail

/// Raw target matrices of a bundled fixture, in order.
inline const std::vector<Matrix>& fixture_targets(std::string_view name) {
    detail::check_fixture_name(name);
    return detail::is_example31(name) ? detail::fixture_data().example31_targets
                                      : detail::fixture_data().example32_targets;
}

/// Validated problem instance for a bundled fixture with rank bound k.
inline ProblemInstance load_fixture(std::string_view name, Index k) {
    return validate_problem(fixture_targets(name), k);
}

/// Starting angles bundled with a fixture for the given rank, if any.
inline std::optional<AngleMatrix> fixture_initial_angles(std::string_view name, Index k) {
    detail::check_fixture_name(name);
    const auto& d = detail::fixture_data();
    if (detail::is_example31(name)) {
        if (k == 2) return AngleMatrix(d.example31_start_k2);
        if (k == 3) return AngleMatrix(d.example31_start_k3);
    } else if (k == 3) {
        return AngleMatrix(d.example32_start_k3);
    }
    return std::nullopt;
}

/// Reference solution matrix reached from the bundled start, if recorded.
inline std::optional<Matrix> fixture_reference_solution(std::string_view name, Index k) {
    detail::check_fixture_name(name);
    const auto& d = detail::fixture_data();
    if (detail::is_example31(name)) {
        if (k == 2) return d.example31_solution_k2;
        if (k == 3) return d.example31_solution_k3;
    } else if (k == 3) {
        return d.example32_solution_k3;
    }
    return std::nullopt;
}

/// Reference solution angles matching fixture_reference_solution.
inline std::optional<Matrix> fixture_reference_angles(std::string_view name, Index k) {
    detail::check_fixture_name(name);
    const auto& d = detail::fixture_data();
    if (detail::is_example31(name)) {
        if (k == 2) return d.example31_angles_k2;
        if (k == 3) return d.example31_angles_k3;
    } else if (k == 3) {
        return d.example32_angles_k3;
    }
    return std::nullopt;
}

} // namespace corrfit
