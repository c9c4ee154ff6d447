// Bit-stable CSV output of snapshots and ledger series.
#pragma once

#include <string>
#include <vector>

#include "euler1d/config.hpp"
#include "euler1d/scheme.hpp"

namespace euler1d {

// snap_<step, zero-padded 6>.csv with header x,rho,m,v,z,w,ztilde,wtilde.
std::string snapshot_filename(long step);
void write_snapshot(const std::string& dir, const Snapshot& snap);

// ledger.csv with header t,mass,energy,Ln,Mn,I_2Nx,min_ztilde,max_wtilde,entropy_prod_cum.
void write_ledger(const std::string& dir, const std::vector<LedgerRow>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void ensure_directory(const std::string& dir);

}  // namespace euler1d
