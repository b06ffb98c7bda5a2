"""From-scratch classifiers: decision tree, Gaussian naive Bayes, RBF SVM."""

from mcclink.classifiers.bayes import NaiveBayesModel, train_naive_bayes
from mcclink.classifiers.model_io import load_model, model_to_dict, save_model
from mcclink.classifiers.svm import (
    GridSearchResult,
    SvmModel,
    grid_search_svm,
    train_svm_rbf,
)
from mcclink.classifiers.tree import DecisionTreeModel, train_decision_tree
from mcclink.classifiers.validation import CvResult, cross_validate, stratified_kfold

__all__ = [
    "CvResult",
    "DecisionTreeModel",
    "GridSearchResult",
    "NaiveBayesModel",
    "SvmModel",
    "cross_validate",
    "grid_search_svm",
    "load_model",
    "model_to_dict",
    "save_model",
    "stratified_kfold",
    "train_decision_tree",
    "train_naive_bayes",
    "train_svm_rbf",
]
