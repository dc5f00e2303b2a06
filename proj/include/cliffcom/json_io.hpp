#pragma once

#include <string>

#include <json.hpp>

#include "cliffcom/commutant.hpp"
#include "cliffcom/dense.hpp"
#include "cliffcom/magic.hpp"
#include "cliffcom/monomial.hpp"

namespace cliffcom::io {

using ordered_json = nlohmann::ordered_json;

// All numeric output uses fixed 17-significant-digit formatting so golden
// files stay stable across runs.
std::string format_double(double v);

ordered_json monomial_to_json(const mono::Monomial &m);
mono::Monomial monomial_from_json(const ordered_json &j);

ordered_json class_to_json(const comm::CommClass &c);
comm::CommClass class_from_json(const ordered_json &j);

ordered_json count_report_to_json(const comm::CountReport &r);
std::string count_report_to_csv(const comm::CountReport &r);

ordered_json gram_to_json(const comm::GramMatrix &g, int k, int q);
ordered_json weingarten_to_json(const comm::WeingartenMatrix &w, const comm::GramMatrix &g, int n, int k, int q);

ordered_json matrix_to_json(const dense::DenseOperator &o);
dense::DenseOperator matrix_from_json(const ordered_json &j);

ordered_json magic_report_to_json(const magic::MagicReport &r);

ordered_json class_table_to_json(const comm::PermClassTable &t);
std::string class_table_to_csv(const comm::PermClassTable &t);

std::string dump(const ordered_json &j);

}  // namespace cliffcom::io
