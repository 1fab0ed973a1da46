"""
Three questions, one exam
=========================

The smallest useful model: one set variable over a pool of three questions
whose topics are A, B, A.  We enumerate every exam of two or three questions,
then ask for exactly two topic-A questions and watch propagation do the work.
"""

from multiexam.solver import Store, solve_all

# Question ids are the set elements; topic A = questions 1 and 3.
store = Store()
exam = store.add_set_var(lower=(), upper={1, 2, 3}, card_min=2, card_max=3)

for sol in solve_all(store):
    print("exam:", sorted(sol[exam]))

# Exactly two topic-A questions.  Only two topic-A questions exist, so the
# count propagator forces both into the exam before any search happens.
store.post_count_by_predicate(exam, {1, 3}, 2, 2)
store.propagate()
v = store.vars[exam]
print("after propagation: lower", sorted(v.lower_set()), "upper", sorted(v.upper_set()))

for sol in solve_all(store):
    print("exam with two topic-A questions:", sorted(sol[exam]))
