// jsonl/csv serialization. one json object per line for datasets, paired test
// files, and logit records; doubles printed with shortest round-trip digits
// so reruns are byte-identical.
#pragma once
#include <optional>
#include <string>
#include <vector>

#include "uqpoison/data.hpp"
#include "uqpoison/evaluation.hpp"

namespace uqp {

std::string fmt_double(double v); // shortest decimal that parses back exactly

void write_dataset_jsonl(const std::vector<McqInstance>& data, const std::string& path);
std::vector<McqInstance> read_dataset_jsonl(const std::string& path, int num_options,
                                            int vocab_size);

void write_pairs_jsonl(const std::vector<PairedInstance>& pairs, const std::string& path);
std::vector<PairedInstance> read_pairs_jsonl(const std::string& path, int num_options,
                                             int vocab_size);

struct LogitRecord {
    std::string id;
    bool triggered = false;
    std::vector<double> logits;
    std::optional<int> label;
    bool calibration = false; // marks the conformal calibration subset
};

void write_logit_records(const std::vector<LogitRecord>& records, const std::string& path);
// malformed lines raise data_error naming the line number
std::vector<LogitRecord> read_logit_records(const std::string& path);

} // namespace uqp
