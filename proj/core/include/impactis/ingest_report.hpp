#pragma once

#include <cstdint>

namespace impactis::ingest {

// Bookkeeping for one ingestion run. readerships_read counts the validated
// records that entered linking, so the partition identity
//   matched + discarded_wrong_year + discarded_wrong_doi +
//   unmatched_readerships == readerships_read
// holds exactly; lines that never parsed or failed validation are in
// readerships_rejected instead. articles_read counts record attempts and
// includes the rejected ones.
struct IngestReport {
    std::uint64_t articles_read = 0;
    std::uint64_t articles_rejected = 0;
    std::uint64_t readerships_read = 0;
    std::uint64_t readerships_rejected = 0;
    std::uint64_t matched = 0;
    std::uint64_t discarded_wrong_year = 0;
    std::uint64_t discarded_wrong_doi = 0;
    std::uint64_t unmatched_readerships = 0;

    bool operator==(const IngestReport&) const = default;
};

}  // namespace impactis::ingest
