#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "anm/vm.hpp"

namespace anm {

// Small program builder with forward labels.  Generated code treats r15 as a
// dependable zero, so emitters refuse to write it (except li r,0).
class Asm {
 public:
  using Label = std::size_t;

  Label label() {
    labels_.push_back(kUnbound);
    return labels_.size() - 1;
  }
  void bind(Label l) { labels_[l] = code_.size(); }
  Label here() {
    Label l = label();
    bind(l);
    return l;
  }

  void li(unsigned r, Nat v) {
    check_dst(r, v == 0);
    code_.push_back(Instr::li(r, std::move(v)));
  }
  void mov(unsigned d, unsigned s) { check_dst(d); code_.push_back(Instr::mov(d, s)); }
  void add(unsigned d, unsigned s) { check_dst(d); code_.push_back(Instr::add(d, s)); }
  void monus(unsigned d, unsigned s) { check_dst(d); code_.push_back(Instr::monus(d, s)); }
  void pair(unsigned d, unsigned x, unsigned y) { check_dst(d); code_.push_back(Instr::pair(d, x, y)); }
  void unpl(unsigned d, unsigned s) { check_dst(d); code_.push_back(Instr::unpl(d, s)); }
  void unpr(unsigned d, unsigned s) { check_dst(d); code_.push_back(Instr::unpr(d, s)); }
  void query(unsigned d, unsigned s) { check_dst(d); code_.push_back(Instr::query(d, s)); }
  void halt(unsigned r) { code_.push_back(Instr::halt(r)); }

  void jz(unsigned r, Label l) {
    code_.push_back(Instr::jz(r, 0));
    fixups_.emplace_back(code_.size() - 1, l);
  }
  // Unconditional jump via the zero register.
  void jmp(Label l) { jz(kZeroReg, l); }

  // Copies raw instructions, shifting jump targets by the current offset.
  void splice(const std::vector<Instr>& body) {
    std::size_t base = code_.size();
    for (Instr ins : body) {
      if (ins.op == Op::JumpIfZero) ins.target += base;
      code_.push_back(std::move(ins));
    }
  }

  std::size_t size() const { return code_.size(); }

  Program build() {
    for (auto& [pos, l] : fixups_) {
      if (labels_[l] == kUnbound) throw std::logic_error("unbound label");
      code_[pos].target = labels_[l];
    }
    fixups_.clear();
    return Program(code_);
  }

 private:
  static constexpr std::size_t kUnbound = SIZE_MAX;
  std::vector<Instr> code_;
  std::vector<std::size_t> labels_;
  std::vector<std::pair<std::size_t, Label>> fixups_;

  static void check_dst(unsigned r, bool zeroing = false) {
    if (r == kZeroReg && !zeroing)
      throw std::logic_error("builder code must not write the zero register");
  }
};

// --- mnemonic text format: one instruction per line, '#' comments ---------

inline const char* op_name(Op op) {
  switch (op) {
    case Op::LoadImm: return "li";
    case Op::Move: return "mov";
    case Op::Add: return "add";
    case Op::Monus: return "monus";
    case Op::JumpIfZero: return "jz";
    case Op::Pair: return "pair";
    case Op::UnpairL: return "unpl";
    case Op::UnpairR: return "unpr";
    case Op::Query: return "query";
    case Op::Halt: return "halt";
    case Op::HaltZero: return "halt0";
  }
  return "?";
}

inline std::string print_assembly(const Program& p) {
  std::ostringstream out;
  for (const auto& i : p.instrs) {
    out << op_name(i.op);
    switch (i.op) {
      case Op::LoadImm: out << " r" << i.a << ", " << i.imm.str(); break;
      case Op::JumpIfZero: out << " r" << i.a << ", " << i.target; break;
      case Op::Pair: out << " r" << i.a << ", r" << i.b << ", r" << i.c; break;
      case Op::Halt: out << " r" << i.a; break;
      case Op::HaltZero: break;
      default: out << " r" << i.a << ", r" << i.b; break;
    }
    out << "\n";
  }
  return out.str();
}

// Parses the mnemonic format.  Jump targets are either instruction numbers or
// labels declared as "name:" lines.
inline Program parse_assembly(const std::string& text) {
  struct Pending { std::size_t pos; std::string label; };
  std::vector<Instr> code;
  std::map<std::string, std::size_t> labels;
  std::vector<Pending> fixups;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("assembly line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::vector<std::string> tok;
    std::string cur;
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        if (!cur.empty()) tok.push_back(cur), cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) tok.push_back(cur);
    if (tok.empty()) continue;
    if (tok.size() == 1 && tok[0].back() == ':') {
      labels[tok[0].substr(0, tok[0].size() - 1)] = code.size();
      continue;
    }
    auto reg = [&](const std::string& t) -> unsigned {
      if (t.size() < 2 || t[0] != 'r') fail("expected register, got " + t);
      unsigned r = std::stoul(t.substr(1));
      if (r >= kNumRegs) fail("register out of range: " + t);
      return r;
    };
    const std::string& op = tok[0];
    auto want = [&](std::size_t n) {
      if (tok.size() != n + 1) fail(op + " expects " + std::to_string(n) + " operands");
    };
    if (op == "li") {
      want(2);
      code.push_back(Instr::li(reg(tok[1]), nat_from_string(tok[2])));
    } else if (op == "mov" || op == "add" || op == "monus" || op == "unpl" ||
               op == "unpr" || op == "query") {
      want(2);
      Op o = op == "mov" ? Op::Move
             : op == "add" ? Op::Add
             : op == "monus" ? Op::Monus
             : op == "unpl" ? Op::UnpairL
             : op == "unpr" ? Op::UnpairR
                            : Op::Query;
      Instr i;
      i.op = o;
      i.a = reg(tok[1]);
      i.b = reg(tok[2]);
      code.push_back(i);
    } else if (op == "jz") {
      want(2);
      Instr i = Instr::jz(reg(tok[1]), 0);
      if (std::isdigit(static_cast<unsigned char>(tok[2][0]))) {
        i.target = std::stoull(tok[2]);
        code.push_back(i);
      } else {
        code.push_back(i);
        fixups.push_back({code.size() - 1, tok[2]});
      }
    } else if (op == "pair") {
      want(3);
      code.push_back(Instr::pair(reg(tok[1]), reg(tok[2]), reg(tok[3])));
    } else if (op == "halt") {
      want(1);
      code.push_back(Instr::halt(reg(tok[1])));
    } else {
      fail("unknown mnemonic " + op);
    }
  }
  for (const auto& f : fixups) {
    auto it = labels.find(f.label);
    if (it == labels.end())
      throw std::invalid_argument("assembly: undefined label " + f.label);
    code[f.pos].target = it->second;
  }
  return Program(code);
}

// Accepts either a decimal Gödel number or assembly text.
inline Program program_from_text(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t j = i;
  while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
  std::size_t k = j;
  while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
  if (i < j && k == text.size()) return Program::from_code(nat_from_string(text.substr(i, j - i)));
  return parse_assembly(text);
}

}  // namespace anm
