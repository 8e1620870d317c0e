#include "shiftcalc/cli.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "shiftcalc/json_io.hpp"
#include "shiftcalc/selftest.hpp"

namespace shiftcalc::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Outcome {
    int exit_code = 0;
    Json result;
};

std::vector<std::size_t> parse_index_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) fail("SchemaError", "empty entry in index list");
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(item)));
        } catch (const std::exception&) {
            fail("SchemaError", "bad index list entry: " + item);
        }
    }
    if (out.empty()) fail("SchemaError", "empty index list");
    return out;
}

MultiIndex parse_alpha(const std::string& s) {
    MultiIndex a;
    for (std::size_t v : parse_index_list(s)) a.push_back(static_cast<u32>(v));
    return a;
}

// A 1-D plain set file is the multiset schema with n = 1.
std::pair<FieldCtx, std::vector<u32>> load_residue_set(const std::string& path) {
    const PointMultiset A = multiset_from_json(load_json_file(path));
    if (A.arity() != 1) fail("SchemaError", path + ": expected a one-dimensional set");
    std::vector<u32> xs;
    for (const auto& [a, m] : A.points()) xs.push_back(a[0]);
    return {FieldCtx(A.prime()), xs};
}

Json capset_bound_json(u64 n, u32 p) {
    const auto b = apps::capset_bound(n, p);
    return Json{{"r", b.r},
                {"N", b.N.str()},
                {"statement_bound", b.statement_bound.str()},
                {"proof_bound", b.proof_bound.str()}};
}

Json sumfree_bound_json(u64 n, u32 p, u32 k, bool& holds) {
    const auto b = apps::sumfree_bound(n, p, k);
    holds = b.n_le_gamma_pow;
    return Json{{"r", b.r},
                {"N", b.N.str()},
                {"kN", b.kN.str()},
                {"gamma", bigfloat_str(b.gamma_value)},
                {"gamma_pow_n", bigfloat_str(b.gamma_pow_n)},
                {"N_le_gamma_pow", b.n_le_gamma_pow}};
}

Json kakeya_bounds_json(u64 n, u32 q) {
    const auto b = apps::kakeya_bounds(n, q);
    return Json{{"binom", b.binom.str()},
                {"mult_bound", rational_json(b.mult_num, b.mult_den)},
                {"mult_bound_ceil", b.mult_ceil.str()}};
}

Json point_list_json(const std::vector<Point>& pts) {
    Json out = Json::array();
    for (const auto& a : pts) out.push_back(a);
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact shift-operator calculus over prime fields"};
    app.require_subcommand(1);

    bool human = false;
    u64 seed = 0;
    app.add_flag("--human", human, "plain-text output");
    app.add_flag("--json", "JSON output (default)");
    app.add_option("--seed", seed, "seed for sampled suites");

    std::function<Outcome()> action;
    std::optional<u32> meta_p;
    std::optional<std::size_t> meta_n;

    // ---- degree ----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("degree", "operator or set degree");
        auto set_path = std::make_shared<std::string>();
        auto combo_path = std::make_shared<std::string>();
        auto bound = std::make_shared<i64>(-1);
        auto upper = std::make_shared<bool>(false);
        auto lower = std::make_shared<bool>(false);
        auto order = std::make_shared<std::string>();
        auto coords = std::make_shared<std::string>();
        sc->add_option("--set", *set_path, "point multiset JSON");
        sc->add_option("--combo", *combo_path, "shift combination JSON");
        sc->add_option("--bound", *bound, "override the scan weight bound");
        sc->add_flag("--upper", *upper, "iterated hyperplane upper bound (plain sets)");
        sc->add_flag("--lower", *lower, "monomial-count lower bound (plain sets)");
        sc->add_option("--order", *order, "coordinate permutation for --upper, e.g. 0,1");
        sc->add_option("--coords", *coords, "coordinate subspace for --lower, e.g. 0,1");
        sc->callback([=, &action, &meta_p, &meta_n] {
            action = [=, &meta_p, &meta_n]() -> Outcome {
                if (!combo_path->empty()) {
                    const ShiftCombo l = combo_from_json(load_json_file(*combo_path));
                    meta_p = l.prime();
                    meta_n = l.arity();
                    std::optional<u64> w;
                    if (*bound >= 0) w = static_cast<u64>(*bound);
                    const DegreeResult dr = degree_and_leading(l, w);
                    if (dr.exhausted)
                        return {3, Json{{"exhausted", true}, {"bound", dr.bound}}};
                    return {0, Json{{"deg", dr.deg}, {"leading", expansion_to_json(dr.leading)}}};
                }
                if (set_path->empty()) fail("SchemaError", "degree needs --set or --combo");
                const PointMultiset A = multiset_from_json(load_json_file(*set_path));
                meta_p = A.prime();
                meta_n = A.arity();
                if (*upper) {
                    std::vector<std::size_t> ord;
                    if (order->empty())
                        for (std::size_t i = 0; i < A.arity(); ++i) ord.push_back(i);
                    else
                        ord = parse_index_list(*order);
                    return {0, Json{{"upper_bound", deg_upper_bound(A, ord)}}};
                }
                if (*lower) {
                    std::vector<std::size_t> cs;
                    if (coords->empty())
                        for (std::size_t i = 0; i < A.arity(); ++i) cs.push_back(i);
                    else
                        cs = parse_index_list(*coords);
                    return {0, Json{{"lower_bound", deg_lower_bound(A, cs)}}};
                }
                std::optional<u64> w;
                if (*bound >= 0) w = static_cast<u64>(*bound);
                return {0, Json{{"deg", deg_set(A, w)}}};
            };
        });
    }

    // ---- delta -----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("delta", "basis of the weight-d leading components");
        auto set_path = std::make_shared<std::string>();
        auto d = std::make_shared<u64>(0);
        auto bound = std::make_shared<i64>(-1);
        sc->add_option("--set", *set_path, "point multiset JSON")->required();
        sc->add_option("--d", *d, "component weight")->required();
        sc->add_option("--bound", *bound, "override the per-coordinate window");
        sc->callback([=, &action, &meta_p, &meta_n] {
            action = [=, &meta_p, &meta_n]() -> Outcome {
                const PointMultiset A = multiset_from_json(load_json_file(*set_path));
                meta_p = A.prime();
                meta_n = A.arity();
                std::optional<u64> w;
                if (*bound >= 0) w = static_cast<u64>(*bound);
                return {0, delta_to_json(delta_space(A, *d, w))};
            };
        });
    }

    // ---- reduce ----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("reduce", "reduction transform (annihilation with --epsilon)");
        auto combo_path = std::make_shared<std::string>();
        auto i = std::make_shared<std::size_t>(0);
        auto eps = std::make_shared<i64>(0);
        auto has_eps = std::make_shared<bool>(false);
        sc->add_option("--combo", *combo_path, "shift combination JSON")->required();
        sc->add_option("--i", *i, "coordinate index, 0-based")->required();
        auto* eo = sc->add_option("--epsilon", *eps, "hyperplane value x_i = epsilon");
        sc->callback([=, &action, &meta_p, &meta_n] {
            *has_eps = eo->count() > 0;
            action = [=, &meta_p, &meta_n]() -> Outcome {
                const ShiftCombo l = combo_from_json(load_json_file(*combo_path));
                meta_p = l.prime();
                meta_n = l.arity();
                const ShiftCombo r = *has_eps
                                         ? annihilate_hyperplane(l, *i, FieldCtx(l.prime()).elem(*eps))
                                         : reduce(l, *i);
                return {0, combo_to_json(r)};
            };
        });
    }

    // ---- construct -------------------------------------------------------
    {
        auto* sc = app.add_subcommand("construct", "one-dimensional combo of exact degree d");
        auto set_path = std::make_shared<std::string>();
        auto d = std::make_shared<u64>(0);
        sc->add_option("--set", *set_path, "one-dimensional multiset JSON")->required();
        sc->add_option("--d", *d, "target degree")->required();
        sc->callback([=, &action, &meta_p, &meta_n] {
            action = [=, &meta_p, &meta_n]() -> Outcome {
                const PointMultiset A = multiset_from_json(load_json_file(*set_path));
                meta_p = A.prime();
                meta_n = A.arity();
                return {0, combo_to_json(construct_1d(A, *d))};
            };
        });
    }

    // ---- cns -------------------------------------------------------------
    {
        auto* sc = app.add_subcommand("cns", "nonvanishing witness for a maximal monomial");
        auto poly_path = std::make_shared<std::string>();
        auto alpha = std::make_shared<std::string>();
        auto fams = std::make_shared<std::vector<std::string>>();
        sc->add_option("--poly", *poly_path, "polynomial JSON")->required();
        sc->add_option("--alpha", *alpha, "maximal monomial, e.g. 1,1")->required();
        sc->add_option("--family", *fams, "one-dimensional multiset JSON (repeat n times)")
            ->required();
        sc->callback([=, &action, &meta_p, &meta_n] {
            action = [=, &meta_p, &meta_n]() -> Outcome {
                const Poly f = poly_from_json(load_json_file(*poly_path));
                meta_p = f.prime();
                meta_n = f.arity();
                std::vector<PointMultiset> families;
                for (const auto& path : *fams)
                    families.push_back(multiset_from_json(load_json_file(path)));
                const auto w = apps::cns_witness(f, parse_alpha(*alpha), families);
                return {0, Json{{"a", w.a}, {"r", w.r}, {"value", w.value.v}}};
            };
        });
    }

    // ---- cd --------------------------------------------------------------
    {
        auto* sc = app.add_subcommand("cd", "sumset size bound with shift certificate");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        sc->add_option("--a", *a_path, "set A JSON (n = 1)")->required();
        sc->add_option("--b", *b_path, "set B JSON (n = 1)")->required();
        sc->callback([=, &action, &meta_p, &meta_n] {
            action = [=, &meta_p, &meta_n]() -> Outcome {
                auto [F, A] = load_residue_set(*a_path);
                auto [F2, B] = load_residue_set(*b_path);
                if (F.p() != F2.p()) fail("CtxMismatch", "A and B over different fields");
                meta_p = F.p();
                meta_n = 1;
                const auto rep = apps::cd_check(F, A, B);
                const bool ok = rep.holds && (!rep.certificate_checked || rep.certificate_ok);
                return {ok ? 0 : 1, Json{{"sumset_size", rep.sumset.size()},
                                         {"sumset", rep.sumset},
                                         {"bound", rep.bound},
                                         {"holds", rep.holds},
                                         {"certificate_checked", rep.certificate_checked},
                                         {"certificate_rank", rep.certificate_rank},
                                         {"certificate_ok", rep.certificate_ok}}};
            };
        });
    }

    // ---- hp --------------------------------------------------------------
    {
        auto* sc = app.add_subcommand("hp", "power-subgroup sumset inequality");
        auto a_path = std::make_shared<std::string>();
        auto b_path = std::make_shared<std::string>();
        auto d = std::make_shared<u64>(0);
        auto poly_path = std::make_shared<std::string>();
        auto cert = std::make_shared<bool>(false);
        sc->add_option("--a", *a_path, "set A JSON (n = 1)")->required();
        sc->add_option("--b", *b_path, "set B JSON (n = 1)")->required();
        sc->add_option("--d", *d, "subgroup order (checks A+B inside Z_d union {0})");
        sc->add_option("--poly", *poly_path, "monic F = z^d + R JSON (technical instance)");
        sc->add_flag("--certificate", *cert, "reconstruct the divisibility certificate");
        sc->callback([=, &action, &meta_p, &meta_n] {
            action = [=, &meta_p, &meta_n]() -> Outcome {
                auto [F, A] = load_residue_set(*a_path);
                auto [F2, B] = load_residue_set(*b_path);
                if (F.p() != F2.p()) fail("CtxMismatch", "A and B over different fields");
                meta_p = F.p();
                meta_n = 1;
                if (!poly_path->empty()) {
                    const Poly Fz = poly_from_json(load_json_file(*poly_path));
                    const auto inst = apps::HPInstance::make(F, A, B, Fz);
                    const auto rep = apps::hp_verify(inst, *cert);
                    const bool ok =
                        rep.holds_intersect && (!rep.with_certificate || rep.certificate_ok);
                    return {ok ? 0 : 1,
                            Json{{"d", rep.d},
                                 {"r", rep.r},
                                 {"K", rep.K},
                                 {"lhs", rep.lhs},
                                 {"rhs_intersect", rep.rhs_intersect},
                                 {"rhs_union", rep.rhs_union},
                                 {"holds_intersect", rep.holds_intersect},
                                 {"holds_union", rep.holds_union},
                                 {"with_certificate", rep.with_certificate},
                                 {"certificate_ok", rep.certificate_ok},
                                 {"certificate_degenerate", rep.certificate_degenerate},
                                 {"vanishing_epsilons", rep.vanishing_epsilons}}};
                }
                if (*d == 0) fail("SchemaError", "hp needs --d or --poly");
                const auto rep = apps::hp_check_zd(F, *d, A, B);
                Json result{{"d", rep.d},
                            {"sumset_size", rep.sumset_size},
                            {"lhs", rep.lhs},
                            {"rhs_intersect", rep.rhs_intersect},
                            {"rhs_union", rep.rhs_union},
                            {"holds_intersect", rep.holds_intersect},
                            {"holds_union", rep.holds_union}};
                bool ok = rep.holds_intersect;
                if (*cert && B.size() >= 2) {
                    Poly Fz(F.p(), 1);
                    Fz.add_term(MultiIndex{static_cast<u32>(*d)}, 1);
                    Fz.add_term(MultiIndex{0}, -1);
                    const auto inst = apps::HPInstance::make(F, A, B, Fz);
                    const auto crep = apps::hp_verify(inst, true);
                    result["certificate_ok"] = crep.certificate_ok;
                    result["certificate_degenerate"] = crep.certificate_degenerate;
                    result["vanishing_epsilons"] = crep.vanishing_epsilons;
                    ok = ok && crep.certificate_ok;
                }
                return {ok ? 0 : 1, result};
            };
        });
    }

    // ---- capset ----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("capset", "3-term progression-free sets");
        sc->require_subcommand(1);
        {
            auto* v = sc->add_subcommand("verify", "check a set for nontrivial 3-APs");
            auto set_path = std::make_shared<std::string>();
            v->add_option("--set", *set_path, "point set JSON")->required();
            v->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    const PointMultiset A = multiset_from_json(load_json_file(*set_path));
                    meta_p = A.prime();
                    meta_n = A.arity();
                    const auto rep = apps::capset_verify(A);
                    return {rep.ok ? 0 : 1,
                            Json{{"ok", rep.ok}, {"violation", point_list_json(rep.violation)}}};
                };
            });
        }
        {
            auto* b = sc->add_subcommand("bound", "monomial-count size bounds");
            auto n = std::make_shared<u64>(0);
            auto p = std::make_shared<u32>(3);
            b->add_option("--n", *n, "dimension")->required();
            b->add_option("--p", *p, "prime")->required();
            b->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    meta_p = *p;
                    meta_n = static_cast<std::size_t>(*n);
                    return {0, capset_bound_json(*n, *p)};
                };
            });
        }
    }

    // ---- sumfree ---------------------------------------------------------
    {
        auto* sc = app.add_subcommand("sumfree", "k-colored sum-free families");
        sc->require_subcommand(1);
        {
            auto* v = sc->add_subcommand("verify", "check the defining property");
            auto fam_path = std::make_shared<std::string>();
            v->add_option("--family", *fam_path, "family JSON")->required();
            v->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    const auto fam = family_from_json(load_json_file(*fam_path));
                    meta_p = fam.p;
                    meta_n = fam.n;
                    const auto rep = apps::sumfree_verify(fam);
                    return {rep.valid ? 0 : 1, Json{{"valid", rep.valid},
                                                    {"reason", rep.reason},
                                                    {"witness", rep.witness}}};
                };
            });
        }
        {
            auto* b = sc->add_subcommand("bound", "k N(n,p,(p-1)n/k) and Gamma^n");
            auto n = std::make_shared<u64>(0);
            auto p = std::make_shared<u32>(3);
            auto k = std::make_shared<u32>(3);
            b->add_option("--n", *n, "dimension")->required();
            b->add_option("--p", *p, "prime")->required();
            b->add_option("--k", *k, "colors")->required();
            b->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    meta_p = *p;
                    meta_n = static_cast<std::size_t>(*n);
                    bool holds = false;
                    Json result = sumfree_bound_json(*n, *p, *k, holds);
                    return {holds ? 0 : 1, result};
                };
            });
        }
    }

    // ---- kakeya ----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("kakeya", "finite-field Kakeya sets");
        sc->require_subcommand(1);
        {
            auto* v = sc->add_subcommand("verify", "line in every direction");
            auto set_path = std::make_shared<std::string>();
            v->add_option("--set", *set_path, "point set JSON")->required();
            v->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    const PointMultiset K = multiset_from_json(load_json_file(*set_path));
                    meta_p = K.prime();
                    meta_n = K.arity();
                    const auto rep = apps::kakeya_verify(K);
                    return {rep.is_kakeya ? 0 : 1,
                            Json{{"is_kakeya", rep.is_kakeya},
                                 {"direction_count", rep.direction_count},
                                 {"missing", point_list_json(rep.missing)}}};
                };
            });
        }
        {
            auto* b = sc->add_subcommand("bounds", "size lower bounds");
            auto n = std::make_shared<u64>(0);
            auto q = std::make_shared<u32>(3);
            b->add_option("--n", *n, "dimension")->required();
            b->add_option("--q", *q, "prime field size")->required();
            b->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    meta_p = *q;
                    meta_n = static_cast<std::size_t>(*n);
                    return {0, kakeya_bounds_json(*n, *q)};
                };
            });
        }
        {
            auto* s = sc->add_subcommand("span", "weight-d leading components span check");
            auto set_path = std::make_shared<std::string>();
            auto d = std::make_shared<u64>(0);
            s->add_option("--set", *set_path, "Kakeya set JSON")->required();
            s->add_option("--d", *d, "weight, at most q-1")->required();
            s->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    const PointMultiset K = multiset_from_json(load_json_file(*set_path));
                    meta_p = K.prime();
                    meta_n = K.arity();
                    const auto rep = apps::kakeya_span_check(K, *d);
                    const bool ok = rep.delta_contains_all && rep.claim_dim_ok;
                    return {ok ? 0 : 1, Json{{"delta_contains_all", rep.delta_contains_all},
                                             {"delta_dim", rep.delta_dim},
                                             {"claim_dim_ok", rep.claim_dim_ok},
                                             {"claim_rank", rep.claim_rank},
                                             {"claim_expected", rep.claim_expected}}};
                };
            });
        }
        {
            auto* ms = sc->add_subcommand("multspan", "multiplicity span check on F_q^n");
            auto q = std::make_shared<u32>(2);
            auto n = std::make_shared<std::size_t>(2);
            auto l = std::make_shared<u64>(2);
            ms->add_option("--q", *q, "prime field size")->required();
            ms->add_option("--n", *n, "dimension")->required();
            ms->add_option("--l", *l, "positive multiple of q")->required();
            ms->callback([=, &action, &meta_p, &meta_n] {
                action = [=, &meta_p, &meta_n]() -> Outcome {
                    meta_p = *q;
                    meta_n = *n;
                    const auto rep = apps::kakeya_mult_span_check(*q, *n, *l);
                    const bool ok = rep.full_column_rank && rep.delta_contains_all;
                    return {ok ? 0 : 1, Json{{"l", rep.l},
                                             {"m", rep.m},
                                             {"d", rep.d},
                                             {"rows", rep.rows},
                                             {"cols", rep.cols},
                                             {"full_column_rank", rep.full_column_rank},
                                             {"delta_contains_all", rep.delta_contains_all}}};
                };
            });
        }
    }

    // ---- bounds ----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("bounds", "exact bound tables");
        sc->require_subcommand(1);
        {
            auto* m = sc->add_subcommand("monomials", "N(n, q, r)");
            auto n = std::make_shared<u64>(0);
            auto q = std::make_shared<std::string>();
            auto r = std::make_shared<u64>(0);
            m->add_option("--n", *n, "variables")->required();
            m->add_option("--q", *q, "per-coordinate cap, or 'inf'")->required();
            m->add_option("--r", *r, "total weight cap")->required();
            m->callback([=, &action] {
                action = [=]() -> Outcome {
                    std::optional<u64> qv;
                    if (*q != "inf") {
                        try {
                            qv = std::stoull(*q);
                        } catch (const std::exception&) {
                            fail("SchemaError", "bad --q value: " + *q);
                        }
                    }
                    return {0, Json{{"N", apps::count_monomials(*n, qv, *r).str()}}};
                };
            });
        }
        {
            auto* b = sc->add_subcommand("capset", "cap-set bounds");
            auto n = std::make_shared<u64>(0);
            auto p = std::make_shared<u32>(3);
            b->add_option("--n", *n)->required();
            b->add_option("--p", *p)->required();
            b->callback([=, &action] {
                action = [=]() -> Outcome { return {0, capset_bound_json(*n, *p)}; };
            });
        }
        {
            auto* b = sc->add_subcommand("sumfree", "k-colored sum-free bounds");
            auto n = std::make_shared<u64>(0);
            auto p = std::make_shared<u32>(3);
            auto k = std::make_shared<u32>(3);
            b->add_option("--n", *n)->required();
            b->add_option("--p", *p)->required();
            b->add_option("--k", *k)->required();
            b->callback([=, &action] {
                action = [=]() -> Outcome {
                    bool holds = false;
                    Json result = sumfree_bound_json(*n, *p, *k, holds);
                    return {holds ? 0 : 1, result};
                };
            });
        }
        {
            auto* b = sc->add_subcommand("kakeya", "Kakeya size bounds");
            auto n = std::make_shared<u64>(0);
            auto q = std::make_shared<u32>(3);
            b->add_option("--n", *n)->required();
            b->add_option("--q", *q)->required();
            b->callback([=, &action] {
                action = [=]() -> Outcome { return {0, kakeya_bounds_json(*n, *q)}; };
            });
        }
    }

    // ---- gamma -----------------------------------------------------------
    {
        auto* sc = app.add_subcommand("gamma", "Gamma_{p,k} minimization");
        auto p = std::make_shared<u32>(3);
        auto k = std::make_shared<u32>(3);
        auto tol = std::make_shared<std::string>("1e-12");
        sc->add_option("--p", *p, "prime")->required();
        sc->add_option("--k", *k, "colors, >= 3")->required();
        sc->add_option("--tol", *tol, "tolerance (default 1e-12)");
        sc->callback([=, &action, &meta_p] {
            action = [=, &meta_p]() -> Outcome {
                meta_p = *p;
                const auto g = apps::gamma(*p, *k, BigFloat(*tol));
                return {0, Json{{"gamma", bigfloat_str(g.value)},
                                {"minimizer", bigfloat_str(g.minimizer)},
                                {"stationarity_residual", bigfloat_str(g.stationarity_residual)},
                                {"unimodal", g.unimodal}}};
            };
        });
    }

    // ---- selftest --------------------------------------------------------
    {
        auto* sc = app.add_subcommand("selftest", "install check");
        auto fault = std::make_shared<bool>(false);
        sc->add_flag("--inject-binom-fault", *fault, "corrupt one binomial table entry")
            ->group(""); // test hook, hidden from help
        sc->callback([=, &action] {
            action = [=]() -> Outcome {
                const SelftestReport rep = selftest(*fault);
                Json lines = Json::array();
                std::stringstream ss(rep.text);
                std::string line;
                while (std::getline(ss, line)) lines.push_back(line);
                return {rep.ok ? 0 : 1, Json{{"ok", rep.ok},
                                             {"first_failure", rep.first_failure},
                                             {"report", lines}}};
            };
        });
    }

    std::vector<const char*> argv;
    argv.push_back("shiftcalc");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    Json result;
    bool ok = true;
    try {
        Outcome o = action();
        code = o.exit_code;
        result = std::move(o.result);
        ok = code == 0;
    } catch (const Error& e) {
        code = is_guard_kind(e.kind()) ? 3 : 2;
        result = Json{{"error", Json{{"kind", e.kind()}, {"message", e.what()}}}};
        ok = false;
    } catch (const std::exception& e) {
        code = 2;
        result = Json{{"error", Json{{"kind", "InternalError"}, {"message", e.what()}}}};
        ok = false;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();

    Json meta{{"version", kVersion},
              {"p", meta_p ? Json(*meta_p) : Json(nullptr)},
              {"n", meta_n ? Json(*meta_n) : Json(nullptr)},
              {"elapsed_ms", elapsed}};
    if (human) {
        out << (ok ? "ok" : "violated or failed") << "\n" << result.dump(2) << "\n";
    } else {
        out << Json{{"ok", ok}, {"result", result}, {"meta", meta}}.dump() << "\n";
    }
    return code;
}

} // namespace shiftcalc::cli
