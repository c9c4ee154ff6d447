#include "euler1d/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace euler1d {

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    out += buf;
}

}  // namespace

std::string snapshot_filename(long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06ld.csv", step);
    return buf;
}

void write_snapshot(const std::string& dir, const Snapshot& snap) {
    std::string body = "x,rho,m,v,z,w,ztilde,wtilde\n";
    for (std::size_t i = 0; i < snap.x.size(); ++i) {
        append_number(body, snap.x[i]);
        for (const std::vector<double>* col :
             {&snap.rho, &snap.m, &snap.v, &snap.z, &snap.w, &snap.ztilde, &snap.wtilde}) {
            body += ',';
            append_number(body, (*col)[i]);
        }
        body += '\n';
    }
    write_text_file(dir + "/" + snapshot_filename(snap.n), body);
}

void write_ledger(const std::string& dir, const std::vector<LedgerRow>& rows) {
    std::string body = "t,mass,energy,Ln,Mn,I_2Nx,min_ztilde,max_wtilde,entropy_prod_cum\n";
    for (const LedgerRow& r : rows) {
        append_number(body, r.t);
        for (double v : {r.mass, r.energy, r.Ln, r.Mn, r.I_2Nx, r.min_ztilde, r.max_wtilde,
                         r.entropy_prod_cum}) {
            body += ',';
            append_number(body, v);
        }
        body += '\n';
    }
    write_text_file(dir + "/ledger.csv", body);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir + " (" + ec.message() + ")");
}

}  // namespace euler1d
