// Copyright 2026 The BinSeeker Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "binseeker/emulator.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>

#include "binseeker/error.h"

namespace binseeker {
namespace {

std::uint64_t MaskFor(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

std::int64_t ToSigned(std::uint64_t v, int width) {
  if (width >= 64) return static_cast<std::int64_t>(v);
  const std::uint64_t sign = std::uint64_t{1} << (width - 1);
  v &= MaskFor(width);
  return static_cast<std::int64_t>((v ^ sign) - sign);
}

// ---------------------------------------------------------------------------
// Compiled form: names resolved to register-file slots, targets to block
// indices.

class SlotTable {
 public:
  int Get(const std::string& name) {
    auto [it, inserted] = slots_.emplace(name, static_cast<int>(slots_.size()));
    return it->second;
  }
  int size() const { return static_cast<int>(slots_.size()); }

 private:
  std::unordered_map<std::string, int> slots_;
};

struct Operand {
  bool immediate = false;
  int slot = -1;
  std::uint64_t value = 0;
};

struct Address {
  bool absolute = false;
  int base = -1;
  std::int64_t offset = 0;
};

struct CompiledOp {
  UopKind kind = UopKind::kConst;
  BinopKind binop = BinopKind::kAdd;
  CmpKind cmp = CmpKind::kEq;
  Region region = Region::kStack;
  int dst = -1;
  Operand a, b;
  Address addr;
  int target_true = -1;
  int target_false = -1;
  const std::string* callee = nullptr;
  bool is_library = false;
};

struct CompiledBlock {
  std::vector<CompiledOp> ops;
  std::vector<int> successors;
};

struct CompiledFunction {
  const FunctionRecord* record = nullptr;
  int entry = 0;
  std::vector<CompiledBlock> blocks;
  std::vector<char> is_head;
  // in_loop[h][b] for every loop head h; empty for non-heads.
  std::vector<std::vector<char>> in_loop;
  // First block outside loop h reached by an edge leaving it, or -1.
  std::vector<int> loop_exit;
};

Operand CompileOperand(const std::string& token, SlotTable* slots,
                       std::uint64_t mask) {
  Operand op;
  if (auto imm = ParseImmediate(token)) {
    op.immediate = true;
    op.value = static_cast<std::uint64_t>(*imm) & mask;
  } else {
    op.slot = slots->Get(token);
  }
  return op;
}

Address CompileAddress(const std::string& token, SlotTable* slots) {
  auto loc = ParseLocation(token);
  if (!loc || loc->kind == Location::Kind::kRegister) {
    throw MissingMicroOps("bad micro-op address '" + token + "'");
  }
  Address a;
  a.absolute = loc->kind == Location::Kind::kAbsolute;
  a.offset = loc->offset;
  if (!a.absolute) a.base = slots->Get(loc->base);
  return a;
}

void FindLoops(CompiledFunction* fn) {
  const int n = static_cast<int>(fn->blocks.size());
  std::vector<std::vector<int>> preds(n);
  for (int b = 0; b < n; ++b) {
    for (int s : fn->blocks[b].successors) preds[s].push_back(b);
  }
  // Iterative DFS from the entry; an edge into a block on the DFS stack is
  // a back edge.
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::pair<int, int>> back_edges;
  std::vector<std::pair<int, std::size_t>> stack = {{fn->entry, 0}};
  state[fn->entry] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto& succ = fn->blocks[node].successors;
    if (next < succ.size()) {
      int s = succ[next++];
      if (state[s] == 0) {
        state[s] = 1;
        stack.push_back({s, 0});
      } else if (state[s] == 1) {
        back_edges.push_back({node, s});
      }
    } else {
      state[node] = 2;
      stack.pop_back();
    }
  }
  fn->is_head.assign(n, 0);
  fn->in_loop.assign(n, {});
  fn->loop_exit.assign(n, -1);
  for (const auto& [tail, head] : back_edges) {
    fn->is_head[head] = 1;
    auto& body = fn->in_loop[head];
    if (body.empty()) {
      body.assign(n, 0);
      body[head] = 1;
    }
    std::vector<int> work;
    if (!body[tail]) {
      body[tail] = 1;
      work.push_back(tail);
    }
    while (!work.empty()) {
      int b = work.back();
      work.pop_back();
      for (int p : preds[b]) {
        if (!body[p]) {
          body[p] = 1;
          work.push_back(p);
        }
      }
    }
  }
  for (int h = 0; h < n; ++h) {
    if (!fn->is_head[h]) continue;
    for (int b = 0; b < n && fn->loop_exit[h] < 0; ++b) {
      if (!fn->in_loop[h][b]) continue;
      for (int s : fn->blocks[b].successors) {
        if (!fn->in_loop[h][s]) {
          fn->loop_exit[h] = s;
          break;
        }
      }
    }
  }
}

std::unique_ptr<CompiledFunction> Compile(const FunctionRecord& f,
                                          SlotTable* slots,
                                          std::uint64_t mask) {
  if (!f.IsExecutable()) {
    throw MissingMicroOps("function '" + f.id + "' has no micro-ops");
  }
  auto fn = std::make_unique<CompiledFunction>();
  fn->record = &f;
  fn->entry = f.BlockIndex(f.entry);
  fn->blocks.resize(f.blocks.size());
  for (const auto& [src, dst] : f.cfg_edges) {
    fn->blocks[f.BlockIndex(src)].successors.push_back(f.BlockIndex(dst));
  }
  for (std::size_t bi = 0; bi < f.blocks.size(); ++bi) {
    CompiledBlock& cb = fn->blocks[bi];
    for (const Instruction& instr : f.blocks[bi].instructions) {
      for (const MicroOp& op : *instr.uops) {
        CompiledOp c;
        c.kind = op.kind;
        c.binop = op.binop;
        c.cmp = op.cmp;
        c.region = op.region;
        switch (op.kind) {
          case UopKind::kConst:
            c.dst = slots->Get(op.dst);
            c.a.immediate = true;
            c.a.value = static_cast<std::uint64_t>(op.literal) & mask;
            break;
          case UopKind::kBinop:
          case UopKind::kCmp:
            c.dst = slots->Get(op.dst);
            c.a = CompileOperand(op.src1, slots, mask);
            c.b = CompileOperand(op.src2, slots, mask);
            break;
          case UopKind::kLoad:
            c.dst = slots->Get(op.dst);
            c.addr = CompileAddress(op.addr, slots);
            break;
          case UopKind::kStore:
            c.addr = CompileAddress(op.addr, slots);
            c.a = CompileOperand(op.src1, slots, mask);
            break;
          case UopKind::kBranch:
            if (!op.src1.empty()) c.a = CompileOperand(op.src1, slots, mask);
            c.target_true = f.BlockIndex(op.target_true);
            c.target_false =
                op.target_false.empty() ? -1 : f.BlockIndex(op.target_false);
            break;
          case UopKind::kCall:
            c.callee = &op.callee;
            c.is_library = op.is_library;
            break;
          case UopKind::kRet:
            if (!op.src1.empty()) c.a = CompileOperand(op.src1, slots, mask);
            break;
        }
        cb.ops.push_back(c);
      }
    }
  }
  FindLoops(fn.get());
  return fn;
}

// ---------------------------------------------------------------------------

struct CmpRecord {
  bool valid = false;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  CmpKind kind = CmpKind::kEq;
};

class Machine {
 public:
  Machine(const CalleeIndex* callees, const EmuConfig& cfg,
          const ArchProfile& profile)
      : callees_(callees),
        cfg_(cfg),
        profile_(profile),
        mask_(MaskFor(cfg.int_width)) {
    sp_ = slots_.Get(profile.stack_pointer);
    fp_ = slots_.Get(profile.frame_pointer);
    ret_ = slots_.Get(profile.return_register);
    arg0_ = slots_.Get(profile.arg_registers.front());
  }

  EmulationResult Run(const FunctionRecord& f) {
    const CompiledFunction& fn = CompiledFor(f);
    Grow();
    const ArgSpec spec = RecognizeArgs(f, profile_);
    const std::vector<std::int64_t> values = ArgumentSequence(cfg_);
    std::size_t next = 0;
    auto take = [&] {
      std::uint64_t v = static_cast<std::uint64_t>(values[next % values.size()]);
      ++next;
      return v & mask_;
    };
    for (const std::string& reg : spec.register_args) {
      const int slot = slots_.Get(reg);
      Grow();
      const std::uint64_t v = take();
      regs_[slot] = v;
      pending_regs_[slot] = v;
    }
    for (std::int64_t off : spec.stack_args) {
      const std::uint64_t addr =
          (kStackStart + static_cast<std::uint64_t>(off)) & mask_;
      const std::uint64_t v = take();
      memory_[addr] = v;
      pending_stack_[addr] = v;
    }
    active_[f.id] = 1;
    RunFrame(fn, kStackStart & mask_);
    EmulationResult out;
    out.signature.events = std::move(events_);
    out.signature.truncated = out_of_steps_;
    out.steps = steps_;
    out.warnings = std::move(warnings_);
    return out;
  }

 private:
  const CompiledFunction& CompiledFor(const FunctionRecord& f) {
    auto it = compiled_.find(&f);
    if (it == compiled_.end()) {
      it = compiled_.emplace(&f, Compile(f, &slots_, mask_)).first;
    }
    return *it->second;
  }

  void Grow() {
    if (static_cast<int>(regs_.size()) < slots_.size()) {
      regs_.resize(slots_.size(), 0);
      cmp_.resize(slots_.size());
    }
  }

  std::int64_t Signed(std::uint64_t v) const {
    return ToSigned(v, cfg_.int_width);
  }

  std::uint64_t Read(int slot) {
    const std::uint64_t v = regs_[slot];
    if (!pending_regs_.empty()) {
      auto it = pending_regs_.find(slot);
      if (it != pending_regs_.end()) {
        if (it->second == v) events_.push_back(SignatureEvent::Input(Signed(v)));
        pending_regs_.erase(it);
      }
    }
    return v;
  }

  std::uint64_t Value(const Operand& op) {
    return op.immediate ? op.value : Read(op.slot);
  }

  void Write(int slot, std::uint64_t v) {
    regs_[slot] = v & mask_;
    cmp_[slot].valid = false;
    if (!pending_regs_.empty()) pending_regs_.erase(slot);
  }

  std::uint64_t EffectiveAddress(const Address& a) {
    std::uint64_t base = a.absolute ? 0 : Read(a.base);
    return (base + static_cast<std::uint64_t>(a.offset)) & mask_;
  }

  bool OnStack(std::uint64_t addr) const {
    const std::uint64_t top = kStackStart & mask_;
    return addr + kStackSpan > top && addr < top + kStackSpan;
  }

  std::uint64_t LoadWord(std::uint64_t addr, Region region) {
    std::uint64_t v;
    auto it = memory_.find(addr);
    if (it != memory_.end()) {
      v = it->second;
    } else if (region == Region::kData) {
      v = static_cast<std::uint64_t>(DataWord(addr, cfg_.int_width)) & mask_;
    } else {
      v = 0;
    }
    if (region == Region::kData) {
      events_.push_back(SignatureEvent::Input(Signed(v)));
    } else if (!pending_stack_.empty()) {
      auto p = pending_stack_.find(addr);
      if (p != pending_stack_.end()) {
        if (p->second == v) {
          events_.push_back(SignatureEvent::Input(Signed(v)));
        }
        pending_stack_.erase(p);
      }
    }
    return v;
  }

  void StoreWord(std::uint64_t addr, std::uint64_t v) {
    memory_[addr] = v;
    if (!pending_stack_.empty()) pending_stack_.erase(addr);
    if (!OnStack(addr)) events_.push_back(SignatureEvent::Output(Signed(v)));
  }

  std::uint64_t Binop(BinopKind kind, std::uint64_t a, std::uint64_t b) {
    const int w = cfg_.int_width;
    switch (kind) {
      case BinopKind::kAdd: return a + b;
      case BinopKind::kSub: return a - b;
      case BinopKind::kMul: return a * b;
      case BinopKind::kDiv: {
        const std::int64_t sb = Signed(b);
        if (sb == 0) return 0;
        const std::int64_t sa = Signed(a);
        if (sb == -1) return static_cast<std::uint64_t>(0) - a;
        return static_cast<std::uint64_t>(sa / sb);
      }
      case BinopKind::kAnd: return a & b;
      case BinopKind::kOr: return a | b;
      case BinopKind::kXor: return a ^ b;
      case BinopKind::kShl: {
        const unsigned s = static_cast<unsigned>(b % static_cast<unsigned>(w));
        return s >= 64 ? 0 : a << s;
      }
      case BinopKind::kShr: {
        const unsigned s = static_cast<unsigned>(b % static_cast<unsigned>(w));
        return s >= 64 ? 0 : (a & mask_) >> s;
      }
    }
    return 0;
  }

  bool Compare(CmpKind kind, std::uint64_t ua, std::uint64_t ub) const {
    const std::int64_t a = Signed(ua);
    const std::int64_t b = Signed(ub);
    switch (kind) {
      case CmpKind::kEq: return a == b;
      case CmpKind::kNe: return a != b;
      case CmpKind::kLt: return a < b;
      case CmpKind::kLe: return a <= b;
      case CmpKind::kGt: return a > b;
      case CmpKind::kGe: return a >= b;
    }
    return false;
  }

  std::uint64_t LibraryCall(const std::string& name) {
    events_.push_back(SignatureEvent::LibCall(name));
    const std::uint64_t a = Read(arg0_);
    const std::int64_t sa = Signed(a);
    const int c = static_cast<int>(a & 0xff);
    auto is_alpha = [](int ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
    };
    if (name == "abs" || name == "labs") {
      return static_cast<std::uint64_t>(sa < 0 ? -sa : sa);
    }
    if (name == "isdigit") return c >= '0' && c <= '9';
    if (name == "isalpha") return is_alpha(c);
    if (name == "isspace") return c == ' ' || (c >= '\t' && c <= '\r');
    if (name == "toupper") {
      return (c >= 'a' && c <= 'z') ? (a & ~std::uint64_t{0xff}) | (c - 32) : a;
    }
    if (name == "tolower") {
      return (c >= 'A' && c <= 'Z') ? (a & ~std::uint64_t{0xff}) | (c + 32) : a;
    }
    if (name == "putchar") return a & 0xff;
    if (name == "srand") {
      rand_state_ = a;
      return 0;
    }
    if (name == "rand") {
      rand_state_ = rand_state_ * 1103515245u + 12345u;
      return (rand_state_ >> 16) & 0x7fff;
    }
    if (name == "malloc") {
      const std::uint64_t ptr = heap_next_;
      const std::uint64_t size = std::min<std::uint64_t>(a, 1 << 16);
      heap_next_ += (size + 15) / 16 * 16 + 16;
      return ptr;
    }
    // free, printf, puts, strlen, atoi and anything unmodeled.
    return 0;
  }

  void Call(const CompiledOp& op) {
    const std::string& name = *op.callee;
    if (op.is_library) {
      Write(ret_, LibraryCall(name));
      return;
    }
    const FunctionRecord* target =
        name == "main" || !callees_ ? nullptr : callees_->Find(name);
    if (!target) {
      if (name != "main") warnings_.push_back("unresolved callee " + name);
      Write(ret_, 0);
      return;
    }
    if (!target->IsExecutable()) {
      warnings_.push_back("callee without micro-ops " + name);
      Write(ret_, 0);
      return;
    }
    int& active = active_[target->id];
    if (active >= 1 + cfg_.recursion_threshold) {
      Write(ret_, 0);
      return;
    }
    const CompiledFunction& fn = CompiledFor(*target);
    Grow();
    const std::uint64_t stack_start = (regs_[sp_] - 4) & mask_;
    std::vector<std::uint64_t> saved = regs_;
    std::vector<CmpRecord> saved_cmp = cmp_;
    ++active;
    RunFrame(fn, stack_start);
    --active;
    const std::uint64_t result = regs_[ret_];
    saved.resize(regs_.size(), 0);
    saved_cmp.resize(cmp_.size());
    regs_ = std::move(saved);
    cmp_ = std::move(saved_cmp);
    regs_[ret_] = result;
    cmp_[ret_].valid = false;
  }

  // Executes one frame until it returns, runs off the CFG, or the step
  // budget runs out.
  void RunFrame(const CompiledFunction& fn, std::uint64_t stack_start) {
    regs_[sp_] = stack_start;
    regs_[fp_] = stack_start;
    const int n = static_cast<int>(fn.blocks.size());
    std::vector<int> head_count(n, 0);
    int cur = fn.entry;
    if (fn.is_head[cur]) head_count[cur] = 1;
    while (true) {
      const CompiledBlock& block = fn.blocks[cur];
      int next = -1;
      int other = -1;
      bool via_branch = false;
      bool conditional = false;
      bool terminated = false;
      for (const CompiledOp& op : block.ops) {
        if (++steps_ > cfg_.step_budget) {
          out_of_steps_ = true;
          steps_ = cfg_.step_budget;
          return;
        }
        switch (op.kind) {
          case UopKind::kConst:
            Write(op.dst, op.a.value);
            break;
          case UopKind::kBinop: {
            const std::uint64_t a = Value(op.a);
            const std::uint64_t b = Value(op.b);
            Write(op.dst, Binop(op.binop, a, b));
            break;
          }
          case UopKind::kCmp: {
            const std::uint64_t a = Value(op.a);
            const std::uint64_t b = Value(op.b);
            Write(op.dst, Compare(op.cmp, a, b) ? 1 : 0);
            cmp_[op.dst] = {true, a, b, op.cmp};
            break;
          }
          case UopKind::kLoad: {
            const std::uint64_t addr = EffectiveAddress(op.addr);
            Write(op.dst, LoadWord(addr, op.region));
            break;
          }
          case UopKind::kStore: {
            const std::uint64_t addr = EffectiveAddress(op.addr);
            StoreWord(addr, Value(op.a));
            break;
          }
          case UopKind::kBranch:
            via_branch = true;
            if (op.target_false < 0) {
              next = op.target_true;
            } else {
              conditional = true;
              const std::uint64_t v = Value(op.a);
              const CmpRecord rec = cmp_[op.a.slot];
              if (rec.valid) {
                events_.push_back(SignatureEvent::Compare(
                    Signed(rec.a), Signed(rec.b), CmpName(rec.kind)));
              } else {
                events_.push_back(
                    SignatureEvent::Compare(Signed(v), 0, "ne"));
              }
              next = v != 0 ? op.target_true : op.target_false;
              other = v != 0 ? op.target_false : op.target_true;
            }
            terminated = true;
            break;
          case UopKind::kCall:
            Call(op);
            if (out_of_steps_) return;
            break;
          case UopKind::kRet:
            if (op.a.immediate || op.a.slot >= 0) {
              const std::uint64_t v = Value(op.a);
              Write(ret_, v);
              events_.push_back(SignatureEvent::Output(Signed(v)));
            }
            return;
        }
        if (terminated) break;
      }
      if (!via_branch) {
        if (block.successors.empty()) return;
        next = block.successors.front();
      }
      if (fn.is_head[next] && head_count[next] + 1 > cfg_.loop_threshold) {
        if (conditional && other != next && other >= 0 &&
            !(fn.is_head[other] &&
              head_count[other] + 1 > cfg_.loop_threshold)) {
          next = other;
        } else {
          next = fn.loop_exit[next];
          if (next < 0) return;
          if (fn.is_head[next] &&
              head_count[next] + 1 > cfg_.loop_threshold) {
            return;
          }
        }
      }
      if (fn.is_head[next]) ++head_count[next];
      cur = next;
    }
  }

  const CalleeIndex* callees_;
  const EmuConfig& cfg_;
  const ArchProfile& profile_;
  const std::uint64_t mask_;
  SlotTable slots_;
  int sp_ = 0, fp_ = 0, ret_ = 0, arg0_ = 0;
  std::unordered_map<const FunctionRecord*, std::unique_ptr<CompiledFunction>>
      compiled_;
  std::vector<std::uint64_t> regs_;
  std::vector<CmpRecord> cmp_;
  std::unordered_map<std::uint64_t, std::uint64_t> memory_;
  std::unordered_map<int, std::uint64_t> pending_regs_;
  std::unordered_map<std::uint64_t, std::uint64_t> pending_stack_;
  std::unordered_map<std::string, int> active_;
  std::int64_t steps_ = 0;
  bool out_of_steps_ = false;
  std::uint64_t rand_state_ = 1;
  std::uint64_t heap_next_ = kHeapStart;
  std::vector<SignatureEvent> events_;
  std::vector<std::string> warnings_;
};

bool ParseInt64(std::string_view s, std::int64_t* out) {
  // Canonical decimal only: no sign other than '-', no leading zeros.
  if (s.empty()) return false;
  std::string_view digits = s[0] == '-' ? s.substr(1) : s;
  if (digits.empty() || (digits[0] == '0' && s.size() > 1)) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), *out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool ValidName(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

ArgSpec RecognizeArgs(const FunctionRecord& f, const ArchProfile& profile) {
  const int n = static_cast<int>(f.blocks.size());
  const int na = static_cast<int>(profile.arg_registers.size());
  std::vector<std::vector<char>> exposed(n, std::vector<char>(na, 0));
  std::vector<std::vector<char>> written(n, std::vector<char>(na, 0));
  std::set<std::int64_t> stack;
  bool sp_written = false;
  std::set<std::int64_t> sp_offsets;
  auto arg_index = [&](const std::string& loc) {
    for (int i = 0; i < na; ++i) {
      if (profile.arg_registers[i] == loc) return i;
    }
    return -1;
  };
  for (int b = 0; b < n; ++b) {
    for (const Instruction& instr : f.blocks[b].instructions) {
      for (const std::string& r : instr.reads) {
        int i = arg_index(r);
        if (i >= 0 && !written[b][i]) exposed[b][i] = 1;
      }
      for (const std::string& w : instr.writes) {
        int i = arg_index(w);
        if (i >= 0) written[b][i] = 1;
        if (w == profile.stack_pointer) sp_written = true;
      }
      for (const auto* list : {&instr.reads, &instr.writes}) {
        for (const std::string& token : *list) {
          auto loc = ParseLocation(token);
          if (!loc || loc->kind != Location::Kind::kRelative ||
              loc->offset <= 0) {
            continue;
          }
          if (loc->base == profile.frame_pointer) stack.insert(loc->offset);
          if (loc->base == profile.stack_pointer) {
            sp_offsets.insert(loc->offset);
          }
        }
      }
    }
  }
  if (!sp_written) stack.insert(sp_offsets.begin(), sp_offsets.end());
  // may_unwritten_in[b][i]: some path from the entry reaches b without
  // writing argument register i.
  std::vector<std::vector<char>> in(n, std::vector<char>(na, 0));
  std::vector<char> reached(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const auto& [s, d] : f.cfg_edges) {
    succ[f.BlockIndex(s)].push_back(f.BlockIndex(d));
  }
  const int entry = f.BlockIndex(f.entry);
  std::vector<int> work = {entry};
  reached[entry] = 1;
  in[entry].assign(na, 1);
  while (!work.empty()) {
    int b = work.back();
    work.pop_back();
    for (int s : succ[b]) {
      bool changed = !reached[s];
      reached[s] = 1;
      for (int i = 0; i < na; ++i) {
        if (in[b][i] && !written[b][i] && !in[s][i]) {
          in[s][i] = 1;
          changed = true;
        }
      }
      if (changed) work.push_back(s);
    }
  }
  ArgSpec spec;
  for (int i = 0; i < na; ++i) {
    for (int b = 0; b < n; ++b) {
      if (reached[b] && exposed[b][i] && in[b][i]) {
        spec.register_args.push_back(profile.arg_registers[i]);
        break;
      }
    }
  }
  spec.stack_args.assign(stack.begin(), stack.end());
  return spec;
}

void EmuConfig::Validate() const {
  if (loop_threshold < 1) throw std::invalid_argument("loop_threshold < 1");
  if (recursion_threshold < 1) {
    throw std::invalid_argument("recursion_threshold < 1");
  }
  if (step_budget < 1) throw std::invalid_argument("step_budget < 1");
  if (int_width < 8 || int_width > 64) {
    throw std::invalid_argument("int_width must be in [8, 64]");
  }
}

std::vector<std::int64_t> ArgumentSequence(const EmuConfig& cfg) {
  std::vector<std::int64_t> out;
  if (!cfg.arg_values.empty()) {
    for (std::int64_t v : cfg.arg_values) {
      out.push_back(ToSigned(static_cast<std::uint64_t>(v), cfg.int_width));
    }
    return out;
  }
  std::mt19937_64 rng(cfg.arg_seed);
  for (int i = 0; i < kArgSequenceLength; ++i) {
    out.push_back(ToSigned(rng(), cfg.int_width));
  }
  return out;
}

std::int64_t DataWord(std::uint64_t address, int int_width) {
  // splitmix64 finalizer, folded to a small non-negative constant.
  std::uint64_t z = address + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return ToSigned(z & 0xffff, int_width);
}

SignatureEvent SignatureEvent::Input(std::int64_t v) {
  return {Kind::kInput, v, 0, ""};
}
SignatureEvent SignatureEvent::Output(std::int64_t v) {
  return {Kind::kOutput, v, 0, ""};
}
SignatureEvent SignatureEvent::Compare(std::int64_t a, std::int64_t b,
                                       std::string_view opcode) {
  return {Kind::kCompare, a, b, std::string(opcode)};
}
SignatureEvent SignatureEvent::LibCall(std::string_view name) {
  return {Kind::kLibCall, 0, 0, std::string(name)};
}

std::string SignatureEvent::Render() const {
  switch (kind) {
    case Kind::kInput: return "I " + std::to_string(a);
    case Kind::kOutput: return "O " + std::to_string(a);
    case Kind::kCompare:
      return "CC " + std::to_string(a) + " " + std::to_string(b) + " " + text;
    case Kind::kLibCall: return "LC " + text;
  }
  return "";
}

std::string SerializeSignature(const Signature& sig) {
  std::string out;
  for (const SignatureEvent& e : sig.events) {
    out += e.Render();
    out += '\n';
  }
  return out;
}

Signature ParseSignature(std::string_view content) {
  Signature sig;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    const std::size_t nl = content.find('\n', pos);
    auto fail = [&](const std::string& what) -> void {
      throw MalformedSignature("signature line " + std::to_string(line_no) +
                               ": " + what);
    };
    if (nl == std::string_view::npos) fail("missing newline");
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    std::vector<std::string_view> f;
    std::size_t i = 0;
    while (i <= line.size()) {
      std::size_t sp = line.find(' ', i);
      if (sp == std::string_view::npos) sp = line.size();
      if (sp == i) fail("empty field");
      f.push_back(line.substr(i, sp - i));
      i = sp + 1;
    }
    std::int64_t a = 0, b = 0;
    if (f[0] == "I" && f.size() == 2 && ParseInt64(f[1], &a)) {
      sig.events.push_back(SignatureEvent::Input(a));
    } else if (f[0] == "O" && f.size() == 2 && ParseInt64(f[1], &a)) {
      sig.events.push_back(SignatureEvent::Output(a));
    } else if (f[0] == "CC" && f.size() == 4 && ParseInt64(f[1], &a) &&
               ParseInt64(f[2], &b) && ParseCmp(f[3])) {
      sig.events.push_back(SignatureEvent::Compare(a, b, f[3]));
    } else if (f[0] == "LC" && f.size() == 2 && ValidName(f[1])) {
      sig.events.push_back(SignatureEvent::LibCall(f[1]));
    } else {
      fail("unrecognized event '" + std::string(line) + "'");
    }
  }
  return sig;
}

void CalleeIndex::Add(std::span<const FunctionRecord> records) {
  for (const FunctionRecord& r : records) Add(r);
}

void CalleeIndex::Add(const FunctionRecord& record) {
  by_id_[record.id] = &record;
}

const FunctionRecord* CalleeIndex::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : it->second;
}

EmulationResult Emulate(const FunctionRecord& f, const CalleeIndex* callees,
                        const EmuConfig& cfg, const ArchProfile& profile) {
  cfg.Validate();
  Machine machine(callees, cfg, profile);
  return machine.Run(f);
}

EmulationResult Emulate(const FunctionRecord& f, const CalleeIndex* callees,
                        const EmuConfig& cfg) {
  return Emulate(f, callees, cfg, ProfileFor(f.arch));
}

double Jaccard(const Signature& a, const Signature& b) {
  if (a.events.empty() && b.events.empty()) return 1.0;
  std::map<std::string, std::pair<int, int>> counts;
  for (const SignatureEvent& e : a.events) ++counts[e.Render()].first;
  for (const SignatureEvent& e : b.events) ++counts[e.Render()].second;
  long inter = 0, uni = 0;
  for (const auto& [key, c] : counts) {
    inter += std::min(c.first, c.second);
    uni += std::max(c.first, c.second);
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace binseeker
