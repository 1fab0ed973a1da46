"""
Constraints for individual students
===================================

Instructor constraints apply to every exam; a student constraint applies to a
single exam and can only narrow it.  Here student 3 must not get any
multiple-choice question and student 5 wants at least three topic-2 questions.
We also limit how often one particular question is handed out across the
class, and print how the extra constraints change the exams.
"""

from multiexam import io, synth
from multiexam import model as m
from multiexam.compiler import solve_task
from multiexam.validate import validate

pool = synth.synth_pool(60, seed=4)
base = synth.standard_task(12)

extra = (
    m.ExamCount(m.QuestionIs(1), max=2),  # question 1 in at most two exams
    m.StudentScoped(3, m.CountScope(m.Atom("type", "=", 3), max=0)),
    m.StudentScoped(5, m.CountScope(m.Atom("topic", "=", 2), min=3)),
)
task = m.MultiExamTask(base.exams, base.card_min, base.card_max, base.seating, base.constraints + extra)

for label, t in (("instructor only", base), ("with student constraints", task)):
    solution, result = solve_task(pool, t)
    assert validate(pool, t, solution).valid
    e3, e5 = solution.exams[2], solution.exams[4]
    print(f"{label}: {result.stats.nodes} nodes")
    print("  student 3 type-3 questions:", sum(pool[q].qtype == 3 for q in e3.questions))
    print("  student 5 topic-2 questions:", sum(pool[q].topic == 2 for q in e5.questions))
    print("  exams containing question 1:", sum(1 in e.questions for e in solution.exams))

# The task file keeps student constraints in their own section.
print(io.dumps(io.task_to_obj(task)["studentConstraints"]))
