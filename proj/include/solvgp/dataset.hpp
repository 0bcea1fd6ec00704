#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace solvgp {

struct DataRecord {
    std::string id;
    std::string smiles;
    double target = 0.0;  // kcal/mol
    bool has_target = true;
};

struct Dataset {
    std::vector<DataRecord> records;
    std::string provenance;

    std::size_t size() const { return records.size(); }
    Eigen::VectorXd targets() const;
    // Records sorted by id, byte-wise ascending.
    Dataset sorted_by_id() const;
};

}  // namespace solvgp
