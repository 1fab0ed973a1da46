"""Solution edits shared by the validator tests and the acceptance run."""

from dataclasses import replace

from multiexam import model as m


def with_exam(solution, index, questions):
    exams = [replace(e, questions=tuple(questions)) if e.index == index else e for e in solution.exams]
    return m.Solution(exams, solution.stats)


def exam(solution, index):
    return next(e for e in solution.exams if e.index == index)


def break_sum(pool, solution, index=1):
    """Swap one question for an unused one worth a different number of points."""
    qs = list(exam(solution, index).questions)
    old = qs[0]
    new = next(q.id for q in pool if q.id not in qs and q.points != pool[old].points)
    qs[0] = new
    return with_exam(solution, index, qs)


def share_three(solution, a, b):
    """Make exam ``b`` contain three questions of exam ``a``."""
    qa, qb = list(exam(solution, a).questions), list(exam(solution, b).questions)
    take = [q for q in qa if q not in qb][: 3 - len(set(qa) & set(qb))]
    keep = [q for q in qb if q not in qa][: len(qb) - len(take)]
    shared = [q for q in qb if q in qa]
    return with_exam(solution, b, shared + keep + take)


def duplicate_question(solution, index=1):
    qs = list(exam(solution, index).questions)
    qs[1] = qs[0]
    return with_exam(solution, index, qs)


def raise_level4(pool, solution, index=1, target=3):
    """Swap in level-4 questions until ``target`` of the exam's questions are level 4."""
    qs = list(exam(solution, index).questions)
    spare = [q.id for q in pool if q.level == 4 and q.id not in qs]
    for i, qid in enumerate(qs):
        if sum(pool[q].level == 4 for q in qs) >= target:
            break
        if pool[qid].level != 4:
            qs[i] = spare.pop(0)
    return with_exam(solution, index, qs)
